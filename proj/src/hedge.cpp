#include "sympath/hedge.hpp"

#include <cmath>

#include "sympath/error.hpp"
#include "sympath/families.hpp"
#include "sympath/json_io.hpp"
#include "sympath/parallel.hpp"
#include "sympath/simulate.hpp"

namespace sympath {

Estimate price_european(const PathBundle& bundle, const std::function<double(double)>& payoff,
                        const MeasureWeight* weight, const std::string& s) {
  const std::size_t comp = bundle.component_index(s);
  const std::size_t n = bundle.grid().n_steps();
  if (weight) SYMPATH_REQUIRE(weight->size() == bundle.n_paths(), "price_european: weight misaligned");
  std::vector<double> x(bundle.n_paths());
  for_each_path(bundle, [&](std::size_t p, const PathBuffer& buf) {
    const double st = buf.component(comp)[n];
    if (!(st > 0.0)) throw InvalidData("price_european: nonpositive price on path " + std::to_string(p));
    x[p] = payoff(st);
    if (!std::isfinite(x[p])) throw InvalidData("price_european: non-finite payoff on path " + std::to_string(p));
  });
  const std::vector<double> zero(x.size(), 0.0);
  const auto w = weight ? std::span<const double>(weight->weights) : std::span<const double>{};
  const RowEstimate e = compare_paired(x, zero, w, {});
  return {e.lhs, e.se};
}

void BarrierContract::validate() const {
  SYMPATH_REQUIRE(std::isfinite(strike) && strike > 0.0, "contract.strike must be > 0");
  SYMPATH_REQUIRE(std::isfinite(barrier) && barrier >= strike, "contract.barrier must be >= strike");
  SYMPATH_REQUIRE(std::isfinite(maturity) && maturity > 0.0, "contract.maturity must be > 0");
}

HedgeLeg hedge_leg(const BarrierContract& c, double alpha) {
  c.validate();
  HedgeLeg leg;
  leg.alpha = alpha;
  leg.quantity = c.strike / c.barrier;
  leg.strike = c.barrier * c.barrier / c.strike;
  if (alpha == 1.0) {
    leg.description = "at first touch s >= B: buy K/s puts struck s^2/K (nominal " + fmt(leg.quantity) +
                      " puts struck " + fmt(leg.strike) + "), sell the call struck " + fmt(c.strike);
  } else {
    leg.description = "at first touch s >= B: buy the claim (S_T/s)^" + fmt(alpha) + " (s^2/S_T - " +
                      fmt(c.strike) + ")+ (nominal s = " + fmt(c.barrier) + "), sell the call struck " +
                      fmt(c.strike);
  }
  return leg;
}

namespace {

double leg_payoff(double alpha, double s, double st, double k) {
  if (alpha == 1.0) return std::max(s - k * st / s, 0.0);
  return std::pow(st / s, alpha) * std::max(s * s / st - k, 0.0);
}

HedgeReport run_hedge(std::string name, const PathBundle& bundle, const BarrierContract& c, double alpha,
                      const HedgeOptions& opts) {
  c.validate();
  SYMPATH_REQUIRE(std::isfinite(alpha), "hedge: alpha must be finite");
  const TimeGrid& grid = bundle.grid();
  SYMPATH_REQUIRE(std::abs(grid.horizon() - c.maturity) <= 1e-12 * c.maturity,
                  "contract.maturity must equal the grid horizon");
  SYMPATH_REQUIRE(opts.restarts == 0 || bundle.spec().has_value(), "hedge: restarts need a catalog bundle");
  const std::size_t s_idx = bundle.component_index("S");
  const std::size_t n = grid.n_steps();
  const double K = c.strike, B = c.barrier;

  // Columns: hit, tau, S_tau, barrier payoff, leg payoff, nominal leg payoff.
  const FeatureTable F = extract_features(bundle, 6, [&](std::size_t p, const PathBuffer& buf, std::span<double> row) {
    const auto s = buf.component(s_idx);
    std::size_t k = 0;
    while (k <= n && s[k] < B) ++k;
    if (k > n) {
      row[0] = row[1] = row[2] = row[3] = row[4] = row[5] = 0.0;
      row[1] = grid.horizon();
      return;
    }
    const double st = s[n], stau = s[k];
    if (!(st > 0.0)) throw InvalidData("hedge: nonpositive price on path " + std::to_string(p));
    row[0] = 1.0;
    row[1] = grid.time(k);
    row[2] = stau;
    if (opts.restarts == 0) {
      row[3] = std::max(st - K, 0.0);
      row[4] = leg_payoff(alpha, stau, st, K);
      row[5] = leg_payoff(alpha, B, st, K);
    } else {
      thread_local PathBuffer work;
      if (work.n_components() != buf.n_components() || work.n_points() != buf.n_points()) work = bundle.make_buffer();
      double a = 0.0, b = 0.0, nb = 0.0;
      for (std::size_t r = 0; r < opts.restarts; ++r) {
        const double sr = restart_terminal(*bundle.spec(), grid, bundle.seed(), p, buf, k,
                                           static_cast<std::uint32_t>(r), s_idx, work);
        a += std::max(sr - K, 0.0);
        b += leg_payoff(alpha, stau, sr, K);
        nb += leg_payoff(alpha, B, sr, K);
      }
      const double R = static_cast<double>(opts.restarts);
      row[3] = a / R;
      row[4] = b / R;
      row[5] = nb / R;
    }
  });

  HedgeReport rep;
  rep.name = std::move(name);
  rep.contract = c;
  rep.leg = hedge_leg(c, alpha);
  rep.n_paths = bundle.n_paths();
  const auto hit = F.column(0), tau = F.column(1), call = F.column(3), leg = F.column(4), nominal = F.column(5);
  for (double h : hit) rep.n_hit += h > 0.0;

  const std::vector<double> zero(hit.size(), 0.0);
  const auto price = [&](const std::vector<double>& x) {
    const auto e = compare_paired(x, zero);
    return Estimate{e.lhs, e.se};
  };
  rep.barrier_price = price(call);
  rep.hedge_price = price(leg);
  rep.nominal_hedge_price = price(nominal);
  const auto id = compare_paired(call, leg);
  rep.pooled_se = id.se;
  rep.z = z_score(id.lhs, id.rhs, id.se);
  const auto nid = compare_paired(call, nominal);
  rep.nominal_z = z_score(nid.lhs, nid.rhs, nid.se);
  std::vector<double> err(hit.size());
  for (std::size_t i = 0; i < err.size(); ++i) err[i] = call[i] - leg[i];
  rep.replication_error = price(err);
  rep.replication_error_sd = rep.replication_error.se * std::sqrt(static_cast<double>(err.size()));

  TestReport& sw = rep.swap_rows;
  sw.test = rep.name + ".swap";
  sw.z_star = opts.z_star;
  sw.metadata = bundle_metadata(bundle);
  sw.metadata["params"] = {{"strike", K}, {"barrier", B}, {"alpha", alpha}, {"restarts", opts.restarts},
                           {"n_bins", opts.n_bins}};
  sw.add_row("identity", id.lhs, id.rhs, id.se);
  if (rep.n_hit == 0) {
    rep.warnings.push_back("no path reached the barrier; identity is degenerate (0 = 0)");
  } else {
    std::vector<double> hit_tau;
    for (std::size_t i = 0; i < hit.size(); ++i)
      if (hit[i] > 0.0) hit_tau.push_back(tau[i]);
    const std::size_t bins = std::min<std::size_t>(opts.n_bins, std::max<std::size_t>(1, hit_tau.size() / 2));
    if (bins > 1) {
      const BinAssignment ba = quantile_bins(hit_tau, bins);
      if (ba.merged) sw.notes.push_back("swap rows: " + std::to_string(ba.merged) + " tau bins merged (ties)");
      std::vector<double> a(hit.size()), b(hit.size());
      for (std::size_t k = 0; k < ba.n_bins(); ++k) {
        std::size_t j = 0;
        for (std::size_t i = 0; i < hit.size(); ++i) {
          const bool in = hit[i] > 0.0 && ba.bin[j] == k;
          if (hit[i] > 0.0) ++j;
          a[i] = in ? call[i] : 0.0;
          b[i] = in ? leg[i] : 0.0;
        }
        const auto e = compare_paired(a, b);
        sw.add_row("swap|tau_bin" + std::to_string(k), e.lhs, e.rhs, e.se);
      }
      nlohmann::json edges = nlohmann::json::array();
      for (double e : ba.edges) edges.push_back(e);
      sw.extras["tau_edges"] = edges;
    }
  }
  sw.finalize();
  rep.pass = sw.pass;
  return rep;
}

}  // namespace

HedgeReport semi_static_hedge(const PathBundle& bundle, const BarrierContract& contract, const HedgeOptions& opts) {
  return run_hedge("semi_static_hedge", bundle, contract, 1.0, opts);
}

HedgeReport power_hedge_demo(const PathBundle& bundle, const BarrierContract& contract, double alpha,
                             const HedgeOptions& opts) {
  return run_hedge("power_hedge", bundle, contract, alpha, opts);
}

nlohmann::json HedgeReport::to_json() const {
  const auto est = [](const Estimate& e) { return nlohmann::json{{"value", number(e.value)}, {"se", number(e.se)}}; };
  return {{"schema", kReportSchema},
          {"test", name},
          {"verdict", pass ? "pass" : "fail"},
          {"contract", {{"strike", contract.strike}, {"barrier", contract.barrier}, {"maturity", contract.maturity}}},
          {"hedge", {{"alpha", leg.alpha}, {"quantity", leg.quantity}, {"strike", leg.strike},
                     {"description", leg.description}}},
          {"n_paths", n_paths},
          {"n_hit", n_hit},
          {"barrier_price", est(barrier_price)},
          {"hedge_price", est(hedge_price)},
          {"pooled_se", number(pooled_se)},
          {"z", number(z)},
          {"nominal_hedge_price", est(nominal_hedge_price)},
          {"nominal_z", number(nominal_z)},
          {"replication_error", est(replication_error)},
          {"replication_error_sd", number(replication_error_sd)},
          {"warnings", warnings},
          {"swap", sympath::to_json(swap_rows)}};
}

}  // namespace sympath
