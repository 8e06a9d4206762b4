#pragma once
// Semi-static hedging of up-and-in calls with European puts. Zero rates, no
// dividends, barrier monitored on the simulation grid.

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sympath/measure_weight.hpp"
#include "sympath/path_bundle.hpp"
#include "sympath/report.hpp"

namespace sympath {

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

/// (Weighted) sample mean of payoff(S_T), ratio-normalized for weights.
Estimate price_european(const PathBundle& bundle, const std::function<double(double)>& payoff,
                        const MeasureWeight* weight = nullptr, const std::string& s = "S");

/// Up-and-in call: pays (S_T - K)+ if S reaches B on the grid before T.
struct BarrierContract {
  double strike = 1.1;
  double barrier = 1.2;
  double maturity = 1.0;

  /// K > 0, K <= B, finite values.
  void validate() const;
};

/// Static leg bought at the touch: a pure function of (K, B, alpha).
struct HedgeLeg {
  double alpha = 1.0;
  /// Put quantity K/B and strike B^2/K (alpha = 1).
  double quantity = 0.0;
  double strike = 0.0;
  std::string description;
};

HedgeLeg hedge_leg(const BarrierContract& c, double alpha = 1.0);

struct HedgeOptions {
  double z_star = 4.0;
  /// Bins on tau among hit paths for the conditional swap rows.
  std::size_t n_bins = 4;
  /// Inner restarts per hit path for the conditional swap value; 0 uses
  /// the path's own continuation.
  std::size_t restarts = 0;
};

struct HedgeReport {
  std::string name;
  BarrierContract contract;
  HedgeLeg leg;
  std::size_t n_paths = 0;
  std::size_t n_hit = 0;
  Estimate barrier_price;
  /// Leg executed at the realized touch level S_tau (exact on a grid).
  Estimate hedge_price;
  double pooled_se = 0.0;
  double z = 0.0;
  /// Leg struck at the nominal barrier B; biased by grid overshoot.
  Estimate nominal_hedge_price;
  double nominal_z = 0.0;
  /// Per-path replication error: barrier payoff minus leg payoff.
  Estimate replication_error;
  double replication_error_sd = 0.0;
  TestReport swap_rows;
  std::vector<std::string> warnings;
  bool pass = false;

  nlohmann::json to_json() const;
};

HedgeReport semi_static_hedge(const PathBundle& bundle, const BarrierContract& contract,
                              const HedgeOptions& opts = {});

/// As semi_static_hedge with the order-alpha leg (S_T/s)^alpha (s^2/S_T - K)+
/// at touch level s.
HedgeReport power_hedge_demo(const PathBundle& bundle, const BarrierContract& contract, double alpha,
                             const HedgeOptions& opts = {});

}  // namespace sympath
