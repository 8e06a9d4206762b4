#pragma once
// Config-driven experiment orchestration behind the command-line tool.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sympath/config.hpp"
#include "sympath/report.hpp"

namespace sympath {

inline constexpr const char* kSummarySchema = "sympath.summary/1";

enum class RunMode { All, Tests, Hedges, Simulate };

struct RunOptions {
  RunMode mode = RunMode::All;
  std::optional<std::uint64_t> seed;     ///< --seed
  std::optional<std::string> out_dir;    ///< --out-dir
  std::vector<std::string> only;         ///< restrict to these invocation names
  std::size_t sample_paths = 8;          ///< paths written by simulate
  std::ostream* log = nullptr;           ///< one progress line per invocation
};

struct RunResult {
  int exit_code = 0;  ///< 0 pass, 2 statistical failure
  nlohmann::json summary;
  std::vector<std::string> files;
};

/// --seed, then config "seed", then SYMPATH_SEED, then 1.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& cli, const ExperimentConfig& cfg);

/// Runs the requested invocations sequentially and writes one JSON report
/// (plus CSV rows) per invocation and summary.json into the output
/// directory. Errors propagate as exceptions; the CLI maps them to exit 1.
RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts);

/// Static, byte-stable catalog text.
std::string catalog_text();

/// CSV with columns row_id,lhs,rhs,se,z.
std::string rows_csv(const TestReport& report);

}  // namespace sympath
