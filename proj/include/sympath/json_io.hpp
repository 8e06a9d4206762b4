#pragma once
// JSON encodings shared by reports, configs and the CLI.

#include <json.hpp>

#include "sympath/path_bundle.hpp"
#include "sympath/process_spec.hpp"
#include "sympath/report.hpp"
#include "sympath/stopping.hpp"
#include "sympath/time_grid.hpp"

namespace sympath {

inline constexpr const char* kReportSchema = "sympath.report/1";

nlohmann::json to_json(const ProcessSpec& spec);
nlohmann::json to_json(const TimeGrid& grid);
nlohmann::json to_json(const StoppingRule& rule);
/// label, spec (or null), grid, n_paths, seed.
nlohmann::json bundle_metadata(const PathBundle& bundle);
nlohmann::json to_json(const TestReport& report);
/// Doubles are encoded as numbers, except non-finite ones which become the
/// strings "inf", "-inf" and "nan".
nlohmann::json number(double x);

/// Strict decoders: unknown keys and wrong types raise InvalidArgument with
/// the dotted path of the offending field.
ProcessSpec process_spec_from_json(const nlohmann::json& j, const std::string& where = "process");
StoppingRule stopping_rule_from_json(const nlohmann::json& j, const std::string& where = "rule");

/// Compact decimal rendering used in row identifiers ("%.6g").
std::string fmt(double x);

}  // namespace sympath
