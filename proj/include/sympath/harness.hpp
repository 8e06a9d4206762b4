#pragma once
// Monte Carlo tests of symmetry and duality identities. Conditional
// identities are checked in weak form, E[g lhs] = E[g rhs], over
// F_tau-measurable multipliers g (quantile-bin indicators of the state at tau
// plus the constant). Every row compares two ratio estimators computed on the
// same paths.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sympath/deterministic_fn.hpp"
#include "sympath/families.hpp"
#include "sympath/measure_weight.hpp"
#include "sympath/path_bundle.hpp"
#include "sympath/report.hpp"
#include "sympath/stopping.hpp"

namespace sympath {

struct HarnessOptions {
  double z_star = 4.0;
};

/// f(M_T - M_tau) against f(M_tau - M_T). `weight` (default P) applies to
/// both sides.
TestReport conditional_symmetry_test(const PathBundle& bundle, const std::string& m, const StoppingRule& rule,
                                     const TestFunctionFamily& fam = {}, const MeasureWeight* weight = nullptr,
                                     const HarnessOptions& opts = {});

/// a in {0, 1/4, 1/2, 3/4, 1} x b in {0, 1/2, 1, 2}.
std::vector<std::complex<double>> default_p_grid();

/// (S_T/S_tau)^p against (S_T/S_tau)^(1-p), real and imaginary parts.
/// Requires Re p in [0, 1] and |Im p| <= 4 (DomainError otherwise).
TestReport self_duality_moment_test(const PathBundle& bundle, const std::string& s, const StoppingRule& rule,
                                    const std::vector<std::complex<double>>& p_grid = default_p_grid(),
                                    const Conditioning& cond = {}, const MeasureWeight* weight = nullptr,
                                    const HarnessOptions& opts = {});

/// f(X_T - X_tau) tilted by e^{w (X_T - X_tau)} against f(X_tau - X_T)
/// tilted by e^{(1-w)(X_T - X_tau)}. For tau = 0 the tilts are the P^w and
/// P^{1-w} densities.
TestReport pw_symmetry_test(const PathBundle& bundle, const std::string& x, const StoppingRule& rule, double w,
                            const TestFunctionFamily& fam = {}, const HarnessOptions& opts = {});

struct QuasiOptions {
  /// Moment rows on S^alpha (alpha != 0).
  std::vector<std::complex<double>> p_grid{{0.25, 0.0}, {0.5, 0.0}, {0.75, 0.0}, {0.25, 1.0}, {0.5, 1.0}, {0.75, 1.0}};
  double max_abs_alpha = 20.0;
};

/// Rows "norm|g": r^alpha vs 1. Rows "dual|f|g": f(log r) vs
/// r^alpha f(-log r), with r = S_T/S_tau. For alpha != 0 also the same
/// identity computed as self-duality of S^alpha ("pow|f|g") and its moment
/// rows ("moment|p|g|re/im"). The two routes are cross-checked in
/// extras.route_max_abs_diff.
TestReport quasi_self_duality_test(const PathBundle& bundle, const std::string& s, double alpha,
                                   const StoppingRule& rule, const TestFunctionFamily& fam = {},
                                   const QuasiOptions& qopts = {}, const HarnessOptions& opts = {});

struct OrderOptions {
  double lo = -10.0;
  double hi = 10.0;
  std::size_t scan_points = 401;
  std::size_t bootstrap = 100;
  double confidence = 0.95;
  /// Bootstrap seed; 0 means the bundle seed.
  std::uint64_t seed = 0;
};

struct OrderEstimate {
  double alpha = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double se = 0.0;
  std::vector<double> roots;
  std::size_t bootstrap_used = 0;
  nlohmann::json to_json() const;
};

/// Solves mean[(S_T/S_0)^alpha] = 1, alpha != 0, from sign changes of
/// h(alpha) = log mean exp(alpha L) / alpha, L = log(S_T/S_0). The root at 1
/// is returned only when it is the only one. Raises NoOrderFound.
OrderEstimate estimate_order(const PathBundle& bundle, const std::string& s = "S", const OrderOptions& opts = {});

/// E exp(i int theta dX) against E exp(-i int theta dX).
TestReport process_symmetry_test(const PathBundle& bundle, const std::string& x,
                                 const std::vector<DeterministicFn>& thetas, const HarnessOptions& opts = {});

struct PhiOptions {
  /// Quadratic variation component used in X^phi. Empty: "QV" when `y` is
  /// the catalog martingale of the bundle's spec, otherwise realized.
  std::string qv;
};

/// E_P exp(i int lambda dX^phi) against E_{Q^phi} exp(-i int lambda dX^phi).
TestReport strong_self_duality_test(const PathBundle& bundle, const std::string& y,
                                    const std::vector<DeterministicFn>& phis,
                                    const std::vector<DeterministicFn>& lambdas, const PhiOptions& popts = {},
                                    const HarnessOptions& opts = {});

/// Law of ([Y]_{t_1}, ..., [Y]_{t_k}) under P against Q^phi: characteristic
/// function rows per checkpoint and jointly, plus CDF rows at the P-median.
/// Weighted Cramer-von Mises distances are reported in extras.
TestReport ocone_qv_law_test(const PathBundle& bundle, const std::string& y, const std::vector<DeterministicFn>& phis,
                             const std::vector<double>& checkpoints, const PhiOptions& popts = {},
                             const HarnessOptions& opts = {});

/// Im E_{H^phi} exp(+-i int lambda dX^phi) = 0.
TestReport hphi_symmetry_test(const PathBundle& bundle, const std::string& y, const std::vector<DeterministicFn>& phis,
                              const std::vector<DeterministicFn>& lambdas, const PhiOptions& popts = {},
                              const HarnessOptions& opts = {});

struct StrictLocalRow {
  double t = 0.0;
  std::size_t n_steps = 0;
  std::size_t n_paths = 0;
  double mean = 0.0;
  double se = 0.0;
};

struct StrictLocalReport {
  std::vector<StrictLocalRow> rows;
  bool below_one = false;        ///< last row more than 4 SE below 1
  bool nonincreasing = false;    ///< means nonincreasing in t within 4 SE
  std::string caveat;
  nlohmann::json to_json() const;
};

/// E[exp(M_t - [M]_t/2)] at the given times for M = int B^2 dB, using the
/// realized [M]. Informational only.
StrictLocalReport strict_local_diagnostic(const PathBundle& cubic, const std::vector<double>& times);

struct StrictLocalOptions {
  std::vector<double> times{0.25, 0.5, 1.0};
  std::vector<std::size_t> n_steps{250, 1000};
  std::size_t n_paths = 100000;
  std::uint64_t seed = 1;
};

/// Runs the diagnostic over several grid resolutions (grid-refinement trend).
StrictLocalReport strict_local_diagnostic(const StrictLocalOptions& opts);

}  // namespace sympath
