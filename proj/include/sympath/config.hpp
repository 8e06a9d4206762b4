#pragma once
// Experiment configuration: strict JSON decoding with field diagnostics.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sympath/deterministic_fn.hpp"
#include "sympath/families.hpp"
#include "sympath/process_spec.hpp"
#include "sympath/time_grid.hpp"

namespace sympath {

inline constexpr const char* kConfigSchema = "sympath.config/1";

/// One requested test. `params` is the raw, validated JSON object; the
/// runner decodes it with the helpers below.
struct TestInvocation {
  std::string name;
  std::string type;
  nlohmann::json params;
};

struct HedgeInvocation {
  std::string name;
  std::string type;  ///< "semi_static" or "power"
  double strike = 1.1;
  double barrier = 1.2;
  double alpha = 1.0;
  std::size_t restarts = 0;
  std::size_t n_bins = 4;
  double z_star = 4.0;
};

struct ExperimentConfig {
  ProcessSpec process = Gbm{};
  double horizon = 1.0;
  std::size_t n_steps = 1000;
  std::size_t n_paths = 100000;
  std::optional<std::uint64_t> seed;
  std::vector<TestInvocation> tests;
  std::vector<HedgeInvocation> hedges;
  std::string out_dir = "out";
  bool write_csv = true;

  TimeGrid grid() const { return TimeGrid::uniform(horizon, n_steps); }
};

/// Test types accepted in "tests[].type".
const std::vector<std::string>& test_types();

/// Throws InvalidArgument("<field path>: <reason>") on any schema violation.
ExperimentConfig parse_config(const nlohmann::json& j);
/// Parses text; JSON syntax errors are reported with line and column.
ExperimentConfig parse_config_text(const std::string& text, const std::string& source = "config");
ExperimentConfig load_config(const std::string& path);

/// Decoders for test parameters, shared with the runner.
std::vector<Payoff> payoffs_from_json(const nlohmann::json& j, const std::string& where);
Payoff payoff_from_string(const std::string& s, const std::string& where);
std::vector<DeterministicFn> functions_from_json(const nlohmann::json& j, double horizon, const std::string& where);
Conditioning conditioning_from_json(const nlohmann::json& j, const std::string& where);

}  // namespace sympath
