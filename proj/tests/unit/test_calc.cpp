#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "sympath/error.hpp"
#include "sympath/families.hpp"
#include "sympath/measure_weight.hpp"
#include "sympath/report.hpp"
#include "sympath/rng.hpp"
#include "sympath/simulate.hpp"
#include "sympath/stochastic_calc.hpp"

using namespace sympath;

TEST(StochasticCalc, ItoIntegralLeftPoint) {
  const std::vector<double> y{0, 1, 3, 2};
  const std::vector<double> h{2, -1, 4};
  std::vector<double> out(4);
  ito_integral(h, y, out);
  EXPECT_EQ(out, (std::vector<double>{0, 2, 0, -4}));
  const auto g = TimeGrid::uniform(3.0, 3);
  EXPECT_EQ(ito_integral(DeterministicFn::constant(1.0), y, g), y);
  EXPECT_THROW(ito_integral(std::vector<double>{1.0}, y, out), InvalidArgument);
}

TEST(StochasticCalc, IntegrandBeyondTheCurrentStepIsIgnored) {
  const std::vector<double> y{0, 1, 3, 2};
  std::vector<double> a(4), b(4);
  ito_integral(std::vector<double>{1, 2, 3}, y, a);
  ito_integral(std::vector<double>{1, 2, -30}, y, b);
  EXPECT_EQ(a[2], b[2]);
}

TEST(StochasticCalc, QuadraticVariation) {
  EXPECT_EQ(quadratic_variation(std::vector<double>{0, 1, -1, -1}), (std::vector<double>{0, 1, 5, 5}));
  // Brownian QV on [0, 1] concentrates at 1.
  const auto b = simulate_brownian(TimeGrid::uniform(1.0, 20000), 1, 3);
  const auto w = b.component_array("W");
  EXPECT_NEAR(quadratic_variation(w).back(), 1.0, 5.0 * std::sqrt(2.0 / 20000));
}

TEST(StochasticCalc, StochasticExponential) {
  const std::vector<double> y{0.0, 0.1, -0.2};
  const auto e = stochastic_exponential(y);
  EXPECT_DOUBLE_EQ(e[0], 1.0);
  EXPECT_DOUBLE_EQ(e[1], std::exp(0.1 - 0.005));
  EXPECT_DOUBLE_EQ(e[2], std::exp(-0.2 - 0.5 * (0.01 + 0.09)));
  EXPECT_THROW(stochastic_exponential(std::vector<double>{1.0, 2.0}), InvalidArgument);
}

TEST(StochasticCalc, QsdBuilder) {
  const std::vector<double> m{0.0, 0.3, 0.1};
  const std::vector<double> qv{0.0, 0.05, 0.12};
  const auto s = build_qsd_process(m, qv, 0.5);
  // kappa = 1/2 cancels the compensator: S = exp(M).
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(s[i], std::exp(m[i]));
  const auto s0 = build_qsd_process(m, qv, 0.0);
  EXPECT_DOUBLE_EQ(s0[2], std::exp(0.1 - 0.06));
  EXPECT_THROW(build_qsd_process(std::vector<double>{0.1, 0.2}, 0.5), InvalidArgument);
}

TEST(StochasticCalc, PhiLogIncrements) {
  const std::vector<double> y{0.0, 0.2, 0.1};
  const std::vector<double> qv{0.0, 0.04, 0.08};
  std::vector<double> dx(2);
  phi_log_increments(std::vector<double>{2.0, -1.0}, y, qv, dx);
  EXPECT_DOUBLE_EQ(dx[0], 0.4 - 0.5 * 4 * 0.04);
  EXPECT_DOUBLE_EQ(dx[1], 0.1 - 0.5 * 0.04);
  phi_log_increments(std::vector<double>{1.0, 1.0}, y, {}, dx);
  EXPECT_DOUBLE_EQ(dx[1], -0.1 - 0.5 * 0.01);
}

TEST(StochasticCalc, PriceIsStochasticExponentialOfY) {
  // For GBM the compensator equals the realized QV only in the limit, but
  // exp(Y - QV/2) with the stored compensator is S exactly.
  const auto b = simulate_process(Gbm{0.25, 0.0, 1.0}, TimeGrid::uniform(1.0, 30), 4, 2);
  const auto lifted = with_qsd_process(b, "Y", "QV", 0.0, "E");
  const auto s = lifted.component_array("S"), e = lifted.component_array("E");
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(e[i] / s[i], 1.0, 1e-13);
}

TEST(DeterministicFn, FamilyAndEvaluation) {
  const auto fam = default_function_family(1.0);
  ASSERT_EQ(fam.size(), 12u);
  for (const auto& f : fam) EXPECT_LE(f.sup_abs(), 1.0);
  const auto q = DeterministicFn::dyadic(1.0, {1, 0.5, -0.5, -1});
  EXPECT_EQ(q(0.0), 1.0);
  EXPECT_EQ(q(0.25), 0.5);
  EXPECT_EQ(q(0.99), -1.0);
  EXPECT_EQ(q(1.0), -1.0);
  EXPECT_NEAR(DeterministicFn::sine(1, 2.0)(1.0), 1.0, 1e-15);
  const auto g = TimeGrid::uniform(1.0, 4);
  EXPECT_EQ(q.on_grid(g), (std::vector<double>{1, 0.5, -0.5, -1}));
}

TEST(MeasureWeight, PAndQ) {
  const auto b = simulate_process(Gbm{0.2, 0.0, 1.0}, TimeGrid::uniform(1.0, 50), 40000, 3);
  const auto p = make_weight(b, WeightRequest{MeasureKind::P});
  EXPECT_TRUE(std::all_of(p.weights.begin(), p.weights.end(), [](double w) { return w == 1.0; }));
  const auto q = make_weight(b, WeightRequest{MeasureKind::Q});
  const double mean = std::accumulate(q.weights.begin(), q.weights.end(), 0.0) / q.size();
  EXPECT_NEAR(mean, 1.0, 1e-12);
  // Raw normalization estimates E[S_T/S_0] = 1.
  EXPECT_NEAR(q.normalization(), 1.0, 4.0 * 0.2 / std::sqrt(40000.0));
  EXPECT_GT(q.effective_sample_size(), 0.9 * 40000);
  EXPECT_THROW(make_weight(b, WeightRequest{MeasureKind::Pw, 1.5}), InvalidArgument);
}

TEST(MeasureWeight, HalfMeasureNormalization) {
  // E[S_T^{1/2}] = exp(-sigma^2 T / 8) for driftless GBM from 1.
  const auto b = simulate_process(Gbm{0.2, 0.0, 1.0}, TimeGrid::uniform(1.0, 10), 40000, 4);
  const auto h = make_weight(b, WeightRequest{MeasureKind::H});
  EXPECT_NEAR(h.normalization(), std::exp(-0.04 / 8), 4.0 * 0.1 / std::sqrt(40000.0));
}

TEST(MeasureWeight, QphiEqualsWeightOfTheStochasticExponential) {
  const auto b = simulate_process(Gbm{0.2, 0.0, 1.0}, TimeGrid::uniform(1.0, 20), 500, 6);
  WeightRequest r{MeasureKind::Qphi};
  r.phi = DeterministicFn::constant(1.0);
  const auto qphi = make_weight(b, r);
  const auto q = make_weight(b, WeightRequest{MeasureKind::Q});
  for (std::size_t i = 0; i < q.size(); ++i) EXPECT_NEAR(qphi.weights[i], q.weights[i], 1e-12);
}

TEST(MeasureWeight, OverflowAndBadData) {
  const std::vector<double> logs{0.0, std::numeric_limits<double>::infinity()};
  EXPECT_THROW(weights_from_log("x", logs), WeightOverflow);
  const auto shifted = weights_from_log("x", std::vector<double>{1000.0, 1001.0});
  EXPECT_NEAR(shifted.weights[1] / shifted.weights[0], std::exp(1.0), 1e-12);
  const auto g = TimeGrid::uniform(1.0, 1);
  const auto bad = PathBundle::from_arrays(g, {"S"}, {{1.0, -1.0, 1.0, 2.0}});
  EXPECT_THROW(make_weight(bad, WeightRequest{MeasureKind::Q}), InvalidData);
}

TEST(Families, PayoffsAndNames) {
  EXPECT_EQ(Payoff::call(0.1)(0.3), 0.3 - 0.1);
  EXPECT_EQ(Payoff::call(0.1)(-0.3), 0.0);
  EXPECT_EQ(Payoff::cube_pos()(2.0) - Payoff::cube_neg()(2.0), 8.0);
  EXPECT_EQ(Payoff::cube_pos()(-2.0) - Payoff::cube_neg()(-2.0), -8.0);
  EXPECT_EQ(Payoff::call(-0.1).name(), "call(-0.1)");
  EXPECT_EQ(default_payoffs().size(), 5u);
}

TEST(Families, BinsPartitionTheSample) {
  std::vector<double> x(1000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.37 * i);
  const auto m = make_multipliers(x, Conditioning{});
  ASSERT_EQ(m.values.size(), 9u);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = 0;
    for (std::size_t k = 1; k < m.values.size(); ++k) s += m.values[k][i];
    EXPECT_EQ(s, 1.0);
    EXPECT_EQ(m.values[0][i], 1.0);
  }
  for (auto c : m.bins.counts) EXPECT_GT(c, 100u);
}

TEST(Families, TiedEdgesMerge) {
  // 70% of the mass at a single value: several quantile edges coincide.
  std::vector<double> x(1000, 0.0);
  for (std::size_t i = 700; i < x.size(); ++i) x[i] = static_cast<double>(i);
  const auto b = quantile_bins(x, 8);
  EXPECT_GT(b.merged, 0u);
  EXPECT_EQ(b.n_bins() + b.merged, 8u);
  for (auto c : b.counts) EXPECT_GT(c, 0u);
  const std::vector<double> constant(50, 1.0);
  const auto one = quantile_bins(constant, 8);
  EXPECT_EQ(one.n_bins(), 1u);
}

TEST(Report, CompareMatchesReference) {
  UniformStream u(StreamId{3, 0, 0});
  std::vector<double> a(5000), b(5000), wl(5000), wr(5000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = u.next();
    b[i] = a[i] + 0.1 * u.next();
    wl[i] = 0.5 + u.next();
    wr[i] = 0.5 + u.next();
  }
  for (bool weighted : {false, true}) {
    const auto sl = weighted ? std::span<const double>(wl) : std::span<const double>{};
    const auto sr = weighted ? std::span<const double>(wr) : std::span<const double>{};
    const auto e = compare_paired(a, b, sl, sr);
    const auto r = reference::compare_paired(a, b, sl, sr);
    EXPECT_NEAR(e.lhs, r.lhs, 1e-13);
    EXPECT_NEAR(e.rhs, r.rhs, 1e-13);
    EXPECT_NEAR(e.se, r.se, 1e-13);
  }
  // Unweighted SE is the SE of the paired difference.
  const auto e = compare_paired(a, b);
  double m = 0, ss = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m += a[i] - b[i];
  m /= a.size();
  for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i] - m) * (a[i] - b[i] - m);
  EXPECT_NEAR(e.se, std::sqrt(ss / (a.size() - 1) / a.size()), 1e-14);
}

TEST(Report, ZScoreAndVerdict) {
  EXPECT_EQ(z_score(1.0, 1.0 + 1e-15, 0.0), 0.0);
  EXPECT_TRUE(std::isinf(z_score(1.0, 0.0, 0.0)));
  EXPECT_DOUBLE_EQ(z_score(1.0, 0.5, 0.1), 5.0);
  TestReport r;
  r.add_row("a", 1.0, 0.9, 0.1);
  r.add_row("b", 1.0, 1.5, 0.1);
  r.finalize();
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.worst_row, "b");
  EXPECT_DOUBLE_EQ(r.max_abs_z, 5.0);
  r.z_star = 6.0;
  r.finalize();
  EXPECT_TRUE(r.pass);
}
