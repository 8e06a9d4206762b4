#include <cmath>

#include "sympath/error.hpp"
#include "sympath/harness.hpp"
#include "sympath/json_io.hpp"
#include "sympath/parallel.hpp"
#include "sympath/simulate.hpp"

namespace sympath {

namespace {

const char* kCaveat =
    "Monte Carlo means of a strict local martingale are downward consistent but heavy tailed: the rare paths "
    "that carry the missing mass are seldom sampled, so a small SE does not certify the level. Qualitative "
    "diagnostic only.";

void summarize(StrictLocalReport& rep) {
  rep.caveat = kCaveat;
  if (rep.rows.empty()) return;
  const auto& last = rep.rows.back();
  rep.below_one = 1.0 - last.mean > 4.0 * last.se;
  rep.nonincreasing = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const auto& a = rep.rows[i - 1];
    const auto& b = rep.rows[i];
    if (a.n_steps != b.n_steps) continue;
    if (b.mean > a.mean + 4.0 * std::hypot(a.se, b.se)) rep.nonincreasing = false;
  }
}

void append_rows(StrictLocalReport& rep, const PathBundle& cubic, const std::vector<double>& times) {
  const TimeGrid& grid = cubic.grid();
  const std::size_t m = cubic.component_index("M");
  std::vector<std::size_t> idx;
  for (double t : times) idx.push_back(grid.index_at_or_before(t));
  const FeatureTable F = extract_features(cubic, idx.size(), [&](std::size_t, const PathBuffer& buf, std::span<double> row) {
    const auto v = buf.component(m);
    double qv = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i <= grid.n_steps() && j < idx.size(); ++i) {
      while (j < idx.size() && idx[j] == i) row[j++] = std::exp(v[i] - v[0] - 0.5 * qv);
      if (i < grid.n_steps()) qv += (v[i + 1] - v[i]) * (v[i + 1] - v[i]);
    }
  });
  const double N = static_cast<double>(cubic.n_paths());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    auto col = F.column(j);
    const double mean = pairwise_sum(col) / N;
    for (double& x : col) x = (x - mean) * (x - mean);
    const double var = pairwise_sum(col) / (N - 1.0);
    rep.rows.push_back({grid.time(idx[j]), grid.n_steps(), cubic.n_paths(), mean, std::sqrt(var / N)});
  }
}

}  // namespace

nlohmann::json StrictLocalReport::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows)
    rs.push_back({{"t", r.t}, {"n_steps", r.n_steps}, {"n_paths", r.n_paths}, {"mean", r.mean}, {"se", r.se}});
  return {{"schema", kReportSchema},
          {"test", "strict_local_diagnostic"},
          {"informational", true},
          {"below_one", below_one},
          {"nonincreasing", nonincreasing},
          {"caveat", caveat},
          {"rows", rs}};
}

StrictLocalReport strict_local_diagnostic(const PathBundle& cubic, const std::vector<double>& times) {
  SYMPATH_REQUIRE(cubic.spec() && cubic.spec()->get_if<CubicBm>(), "strict_local_diagnostic: CubicBM bundle required");
  SYMPATH_REQUIRE(!times.empty(), "strict_local_diagnostic: no times");
  StrictLocalReport rep;
  append_rows(rep, cubic, times);
  summarize(rep);
  return rep;
}

StrictLocalReport strict_local_diagnostic(const StrictLocalOptions& opts) {
  SYMPATH_REQUIRE(!opts.times.empty() && !opts.n_steps.empty(), "strict_local_diagnostic: empty options");
  double horizon = 0.0;
  for (double t : opts.times) horizon = std::max(horizon, t);
  StrictLocalReport rep;
  for (std::size_t n : opts.n_steps) {
    const auto bundle = simulate_process(CubicBm{}, TimeGrid::uniform(horizon, n), opts.n_paths, opts.seed);
    append_rows(rep, bundle, opts.times);
  }
  summarize(rep);
  return rep;
}

}  // namespace sympath
