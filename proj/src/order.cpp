#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "harness_detail.hpp"
#include "sympath/error.hpp"
#include "sympath/parallel.hpp"
#include "sympath/rng.hpp"

namespace sympath {

namespace {

constexpr std::uint32_t kBootstrapComponent = 0xB007;

// h(alpha) = log(sum c_i e^{alpha L_i} / sum c_i) / alpha; counts empty = 1.
double moment_h(std::span<const double> L, std::span<const double> counts, double alpha, std::vector<double>& tmp) {
  const std::size_t n = L.size();
  tmp.resize(n);
  const double total = counts.empty() ? static_cast<double>(n) : pairwise_sum(counts);
  if (std::abs(alpha) < 1e-12) {
    for (std::size_t i = 0; i < n; ++i) tmp[i] = (counts.empty() ? 1.0 : counts[i]) * L[i];
    return pairwise_sum(tmp) / total;
  }
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (counts.empty() || counts[i] > 0) mx = std::max(mx, alpha * L[i]);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = (counts.empty() ? 1.0 : counts[i]) * std::exp(alpha * L[i] - mx);
  return (std::log(pairwise_sum(tmp) / total) + mx) / alpha;
}

template <class F>
double refine(F&& h, double a, double b, double fa, double fb) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  boost::uintmax_t it = 100;
  const auto r = boost::math::tools::toms748_solve(h, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(45), it);
  return 0.5 * (r.first + r.second);
}

}  // namespace

nlohmann::json OrderEstimate::to_json() const {
  return {{"alpha", alpha}, {"ci", {ci_lo, ci_hi}}, {"se", se}, {"roots", roots}, {"bootstrap_used", bootstrap_used}};
}

OrderEstimate estimate_order(const PathBundle& bundle, const std::string& s, const OrderOptions& opts) {
  SYMPATH_REQUIRE(opts.lo < opts.hi && opts.scan_points >= 3, "estimate_order: bad bracket");
  SYMPATH_REQUIRE(opts.confidence > 0.0 && opts.confidence < 1.0, "estimate_order: confidence must lie in (0, 1)");
  const std::size_t comp = bundle.component_index(s);
  const std::size_t n = bundle.grid().n_steps();
  std::vector<double> L(bundle.n_paths());
  for_each_path(bundle, [&](std::size_t p, const PathBuffer& buf) {
    const auto v = buf.component(comp);
    if (!(v[0] > 0.0) || !(v[n] > 0.0)) throw InvalidData("estimate_order: nonpositive price on path " + std::to_string(p));
    L[p] = std::log(v[n] / v[0]);
  });

  std::vector<double> tmp;
  auto h = [&](double a) { return moment_h(L, {}, a, tmp); };

  OrderEstimate out;
  const std::size_t K = opts.scan_points;
  double prev_a = opts.lo, prev_h = h(prev_a);
  for (std::size_t k = 1; k < K; ++k) {
    const double a = opts.lo + (opts.hi - opts.lo) * static_cast<double>(k) / static_cast<double>(K - 1);
    const double ha = h(a);
    if ((prev_h < 0.0 && ha > 0.0) || (prev_h > 0.0 && ha < 0.0) || ha == 0.0)
      out.roots.push_back(refine(h, prev_a, a, prev_h, ha));
    prev_a = a;
    prev_h = ha;
  }
  if (out.roots.empty()) throw NoOrderFound("estimate_order: h(alpha) has no sign change in the bracket");

  // Roots other than the one at 1 are preferred; the most central one wins.
  std::vector<double> nontrivial;
  for (double r : out.roots)
    if (std::abs(r - 1.0) > 0.05) nontrivial.push_back(r);
  const auto& pool = nontrivial.empty() ? out.roots : nontrivial;
  out.alpha = *std::min_element(pool.begin(), pool.end(),
                                [](double x, double y) { return std::abs(x - 1.0) < std::abs(y - 1.0); });

  // Multinomial bootstrap, one counter-based stream per replicate.
  const std::uint64_t seed = opts.seed ? opts.seed : bundle.seed();
  const std::size_t N = L.size();
  std::vector<double> boot(opts.bootstrap, std::numeric_limits<double>::quiet_NaN());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t rep = 0; rep < opts.bootstrap; ++rep) {
    UniformStream u(StreamId{seed, rep, kBootstrapComponent});
    std::vector<double> counts(N, 0.0), work;
    for (std::size_t i = 0; i < N; ++i) ++counts[static_cast<std::size_t>(u.next_u64() % N)];
    auto hb = [&](double a) { return moment_h(L, counts, a, work); };
    for (double d = 0.25; d <= 2.0 * (opts.hi - opts.lo); d *= 2.0) {
      const double a = std::max(opts.lo, out.alpha - d), b = std::min(opts.hi, out.alpha + d);
      const double fa = hb(a), fb = hb(b);
      if ((fa <= 0.0) != (fb <= 0.0)) {
        boot[rep] = refine(hb, a, b, fa, fb);
        break;
      }
      if (a == opts.lo && b == opts.hi) break;
    }
  }
  std::vector<double> ok;
  for (double b : boot)
    if (std::isfinite(b)) ok.push_back(b);
  out.bootstrap_used = ok.size();
  if (ok.size() >= 2) {
    std::sort(ok.begin(), ok.end());
    const auto quantile = [&](double q) {
      const double pos = q * static_cast<double>(ok.size() - 1);
      const auto i = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(i);
      return i + 1 < ok.size() ? ok[i] * (1.0 - frac) + ok[i + 1] * frac : ok[i];
    };
    out.ci_lo = std::min(out.alpha, quantile(0.5 * (1.0 - opts.confidence)));
    out.ci_hi = std::max(out.alpha, quantile(0.5 * (1.0 + opts.confidence)));
    double m = 0.0, ss = 0.0;
    for (double b : ok) m += b;
    m /= static_cast<double>(ok.size());
    for (double b : ok) ss += (b - m) * (b - m);
    out.se = std::sqrt(ss / static_cast<double>(ok.size() - 1));
  } else {
    out.ci_lo = out.ci_hi = out.alpha;
  }
  return out;
}

}  // namespace sympath
