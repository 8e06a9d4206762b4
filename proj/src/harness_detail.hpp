#pragma once
// Helpers shared by the harness translation units.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sympath/families.hpp"
#include "sympath/harness.hpp"
#include "sympath/path_bundle.hpp"
#include "sympath/report.hpp"
#include "sympath/stopping.hpp"

namespace sympath::detail {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

/// Per-path values of one component at tau and at T, and the conditioning
/// statistic at tau.
struct Stopped {
  std::vector<double> at_tau;
  std::vector<double> at_T;
  std::vector<double> stat;
  std::vector<double> tau_time;
};

Stopped stopped_values(const PathBundle& bundle, std::size_t comp, const StoppingRule& rule,
                       const Conditioning& cond);

TestReport start_report(std::string name, const PathBundle& bundle, const HarnessOptions& opts,
                        nlohmann::json params);

void add_compare(TestReport& r, std::string id, std::span<const double> a, std::span<const double> b,
                 std::span<const double> wl = {}, std::span<const double> wr = {});

void note_bins(TestReport& r, const Multipliers& g, const Conditioning& cond);

nlohmann::json conditioning_json(const Conditioning& cond);
nlohmann::json payoff_names(const std::vector<Payoff>& payoffs);
nlohmann::json fn_names(const std::vector<DeterministicFn>& fns);

std::string p_label(std::complex<double> p);
void check_p_grid(const std::vector<std::complex<double>>& p_grid);

/// Index of the quadratic variation component for X^phi, or npos for realized.
std::size_t resolve_qv(const PathBundle& bundle, const std::string& y, const PhiOptions& popts);

}  // namespace sympath::detail
