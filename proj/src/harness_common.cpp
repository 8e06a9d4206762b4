#include <cmath>

#include "harness_detail.hpp"
#include "sympath/error.hpp"
#include "sympath/json_io.hpp"
#include "sympath/parallel.hpp"

namespace sympath::detail {

Stopped stopped_values(const PathBundle& bundle, std::size_t comp, const StoppingRule& rule,
                       const Conditioning& cond) {
  const auto rc = rule_component(bundle, rule);
  const std::size_t cidx = cond.component.empty() ? comp : bundle.component_index(cond.component);
  const TimeGrid& grid = bundle.grid();
  const std::size_t n = grid.n_steps();
  const FeatureTable t = extract_features(bundle, 4, [&](std::size_t, const PathBuffer& buf, std::span<double> row) {
    const std::size_t k = stopping_index(rule, grid, rc ? buf.component(*rc) : std::span<const double>{});
    const auto v = buf.component(comp);
    row[0] = v[k];
    row[1] = v[n];
    row[2] = cond.stat == ConditioningStat::StoppingTime ? grid.time(k) : buf.component(cidx)[k];
    row[3] = grid.time(k);
  });
  return Stopped{t.column(0), t.column(1), t.column(2), t.column(3)};
}

TestReport start_report(std::string name, const PathBundle& bundle, const HarnessOptions& opts,
                        nlohmann::json params) {
  SYMPATH_REQUIRE(opts.z_star > 0.0, "harness: z_star must be > 0");
  SYMPATH_REQUIRE(bundle.n_paths() >= 2, "harness: need at least 2 paths");
  TestReport r;
  r.test = std::move(name);
  r.z_star = opts.z_star;
  r.metadata = bundle_metadata(bundle);
  r.metadata["params"] = std::move(params);
  return r;
}

void add_compare(TestReport& r, std::string id, std::span<const double> a, std::span<const double> b,
                 std::span<const double> wl, std::span<const double> wr) {
  const RowEstimate e = compare_paired(a, b, wl, wr);
  r.add_row(std::move(id), e.lhs, e.rhs, e.se);
}

void note_bins(TestReport& r, const Multipliers& g, const Conditioning& cond) {
  if (g.bins.merged > 0)
    r.notes.push_back("conditioning: " + std::to_string(g.bins.merged) + " of " + std::to_string(cond.n_bins) +
                      " quantile bins merged with a neighbour (tied edges)");
  nlohmann::json edges = nlohmann::json::array();
  for (double e : g.bins.edges) edges.push_back(e);
  r.extras["bin_edges"] = edges;
  r.extras["bin_counts"] = g.bins.counts;
}

nlohmann::json conditioning_json(const Conditioning& cond) {
  return {{"component", cond.component},
          {"stat", cond.stat == ConditioningStat::StoppingTime ? "tau" : "value_at_tau"},
          {"n_bins", cond.n_bins},
          {"include_constant", cond.include_constant}};
}

nlohmann::json payoff_names(const std::vector<Payoff>& payoffs) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& f : payoffs) j.push_back(f.name());
  return j;
}

nlohmann::json fn_names(const std::vector<DeterministicFn>& fns) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& f : fns) j.push_back(f.name());
  return j;
}

std::string p_label(std::complex<double> p) {
  return fmt(p.real()) + (p.imag() < 0 ? "-" : "+") + fmt(std::abs(p.imag())) + "i";
}

void check_p_grid(const std::vector<std::complex<double>>& p_grid) {
  SYMPATH_REQUIRE(!p_grid.empty(), "p_grid must not be empty");
  for (const auto& p : p_grid) {
    if (!(p.real() >= 0.0 && p.real() <= 1.0))
      throw DomainError("p = " + p_label(p) + ": real part must lie in [0, 1]");
    if (!(std::abs(p.imag()) <= 4.0)) throw DomainError("p = " + p_label(p) + ": |imaginary part| must be <= 4");
  }
}

std::size_t resolve_qv(const PathBundle& bundle, const std::string& y, const PhiOptions& popts) {
  if (popts.qv == "realized") return npos;
  if (!popts.qv.empty()) return bundle.component_index(popts.qv);
  if (bundle.spec() && bundle.spec()->martingale_component() == y && bundle.has_component("QV"))
    return bundle.component_index("QV");
  return npos;
}

}  // namespace sympath::detail
