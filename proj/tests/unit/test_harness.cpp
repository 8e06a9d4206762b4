#include <gtest/gtest.h>

#include <cmath>

#include "sympath/error.hpp"
#include "sympath/harness.hpp"
#include "sympath/simulate.hpp"

using namespace sympath;

namespace {

const TimeGrid kGrid = TimeGrid::uniform(1.0, 200);
constexpr std::size_t kPaths = 20000;

PathBundle gbm(double lambda, std::uint64_t seed = 11) {
  return simulate_process(Gbm{0.2, lambda, 1.0}, kGrid, kPaths, seed);
}

// Two-step coin fixture: X_{1/2} = xi, X_1 = xi + xi * eta with xi = +-1 and
// eta in {2, -1, -1}. Every combination appears equally often, so the law of
// X is exactly symmetric while the increment given X_{1/2} is skewed.
PathBundle coin_fixture(std::size_t reps) {
  const TimeGrid g = TimeGrid::uniform(1.0, 2);
  std::vector<double> x;
  for (std::size_t r = 0; r < reps; ++r) {
    for (double xi : {1.0, -1.0}) {
      for (double eta : {2.0, -1.0, -1.0}) {
        x.insert(x.end(), {0.0, xi, xi + xi * eta});
      }
    }
  }
  return PathBundle::from_arrays(g, {"X"}, {x});
}

PathBundle negated(const PathBundle& b, const std::string& c) {
  auto v = b.component_array(c);
  for (double& x : v) x = -x;
  return PathBundle::from_arrays(b.grid(), {c}, {v});
}

}  // namespace

TEST(SelfDualityMoments, DriftlessGbmPassesAtFixedAndBarrierTimes) {
  const auto b = gbm(0.0);
  const auto fixed = self_duality_moment_test(b, "S", DeterministicTime{0.5});
  EXPECT_TRUE(fixed.pass) << fixed.worst_row << " " << fixed.max_abs_z;
  EXPECT_EQ(fixed.rows.size(), default_p_grid().size() * 9 * 2);
  const auto hit = self_duality_moment_test(b, "S", BarrierHit{"S", 1.1});
  EXPECT_TRUE(hit.pass) << hit.worst_row << " " << hit.max_abs_z;
}

TEST(SelfDualityMoments, DriftedGbmFails) {
  const auto r = self_duality_moment_test(gbm(0.5), "S", DeterministicTime{0.0});
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.max_abs_z, 10.0);
}

TEST(SelfDualityMoments, SwappedExponentsSwapSides) {
  const auto b = gbm(0.3);
  const std::vector<std::complex<double>> grid{{0.25, 1.0}, {0.75, -1.0}};
  const auto r = self_duality_moment_test(b, "S", DeterministicTime{0.3}, grid);
  for (const std::string g : {"1", "bin3"}) {
    for (const std::string part : {"|re", "|im"}) {
      const auto* a = r.find("p=0.25+1i|g=" + g + part);
      const auto* c = r.find("p=0.75-1i|g=" + g + part);
      ASSERT_TRUE(a && c);
      EXPECT_DOUBLE_EQ(a->lhs, c->rhs);
      EXPECT_DOUBLE_EQ(a->rhs, c->lhs);
      EXPECT_NEAR(a->z, -c->z, 1e-9);
    }
  }
}

TEST(SelfDualityMoments, DomainAndDataChecks) {
  const auto b = gbm(0.0);
  EXPECT_THROW(self_duality_moment_test(b, "S", DeterministicTime{0.5}, {{2.0, 0.0}}), DomainError);
  EXPECT_THROW(self_duality_moment_test(b, "S", DeterministicTime{0.5}, {{0.5, 5.0}}), DomainError);
  const TimeGrid g = TimeGrid::uniform(1.0, 1);
  const auto bad = PathBundle::from_arrays(g, {"S"}, {{1.0, 2.0, 1.0, -0.5}});
  EXPECT_THROW(self_duality_moment_test(bad, "S", DeterministicTime{0.0}), InvalidData);
}

TEST(ConditionalSymmetry, BrownianPassesAndReflectionSwapsSides) {
  const auto b = simulate_brownian(kGrid, kPaths, 5);
  const auto r = conditional_symmetry_test(b, "W", BarrierHit{"W", 0.5});
  EXPECT_TRUE(r.pass) << r.worst_row << " " << r.max_abs_z;

  TestFunctionFamily fam;
  fam.conditioning.n_bins = 0;
  fam.payoffs = cube_payoffs();
  const auto x = simulate_process(Gbm{0.2, 0.4, 1.0}, kGrid, 4000, 2).materialize();
  const auto plus = conditional_symmetry_test(x, "X", DeterministicTime{0.25}, fam);
  const auto minus = conditional_symmetry_test(negated(x, "X"), "X", DeterministicTime{0.25}, fam);
  ASSERT_EQ(plus.rows.size(), minus.rows.size());
  for (std::size_t i = 0; i < plus.rows.size(); ++i) {
    EXPECT_EQ(plus.rows[i].lhs, minus.rows[i].rhs);
    EXPECT_EQ(plus.rows[i].rhs, minus.rows[i].lhs);
  }
}

TEST(ConditionalSymmetry, ProcessSymmetryDoesNotImplyConditionalSymmetry) {
  const auto b = coin_fixture(2000);
  const auto law = process_symmetry_test(b, "X", default_function_family(1.0));
  EXPECT_LT(law.max_abs_z, 1e-6);
  EXPECT_TRUE(law.pass);

  TestFunctionFamily fam;
  fam.payoffs = cube_payoffs();
  const auto cond = conditional_symmetry_test(b, "X", DeterministicTime{0.5}, fam);
  EXPECT_FALSE(cond.pass);
  // Two conditioning values: the quantile edges collapse onto one.
  EXPECT_TRUE(cond.find("f=cube+|g=bin1") != nullptr);
  EXPECT_TRUE(cond.find("f=cube+|g=bin2") == nullptr);
  // Unconditionally the increment is symmetric.
  EXPECT_LT(std::abs(cond.find("f=cube+|g=1")->z), 1e-6);
}

TEST(ConditionalSymmetry, CubicMartingaleFailsGivenTheDriver) {
  const auto b = simulate_process(CubicBm{}, kGrid, kPaths, 8);
  EXPECT_TRUE(process_symmetry_test(b, "M", default_function_family(1.0)).pass);
  TestFunctionFamily fam;
  fam.payoffs = cube_payoffs();
  fam.conditioning.component = "B";
  const auto r = conditional_symmetry_test(b, "M", DeterministicTime{0.5}, fam);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.max_abs_z, 5.0);
}

TEST(PwSymmetry, HoldsForEveryWeightUnderSelfDuality) {
  const auto b = gbm(0.0, 21);
  for (double w : {0.0, 0.25, 1.0}) {
    const auto r = pw_symmetry_test(b, "X", BarrierHit{"S", 1.15}, w);
    EXPECT_TRUE(r.pass) << w << " " << r.worst_row << " " << r.max_abs_z;
  }
  EXPECT_FALSE(pw_symmetry_test(gbm(0.5, 21), "X", DeterministicTime{0.0}, 0.5).pass);
}

TEST(QuasiSelfDuality, OrderOfDriftedGbm) {
  // alpha = 1 - 2 lambda / sigma^2 = -1.5.
  const auto g = simulate_process(Gbm{0.2, 0.05, 1.0}, kGrid, kPaths, 3);
  const auto r = quasi_self_duality_test(g, "S", -1.5, BarrierHit{"S", 1.1});
  EXPECT_TRUE(r.pass) << r.worst_row << " " << r.max_abs_z;
  EXPECT_LT(r.extras.at("route_max_abs_diff").get<double>(), 1e-12);
  const auto wrong = quasi_self_duality_test(g, "S", 1.0, DeterministicTime{0.0});
  EXPECT_FALSE(wrong.pass);
  EXPECT_THROW(quasi_self_duality_test(g, "S", 25.0, DeterministicTime{0.0}), WeightOverflow);
}

TEST(QuasiSelfDuality, AlphaOneIsSelfDuality) {
  const auto b = gbm(0.0, 4);
  const auto r = quasi_self_duality_test(b, "S", 1.0, DeterministicTime{0.5});
  EXPECT_TRUE(r.pass) << r.worst_row << " " << r.max_abs_z;
  // r^1 has mean 1 given F_tau for a martingale.
  EXPECT_LT(std::abs(r.find("norm|g=1")->z), 4.0);
}

TEST(PhiFamily, GbmPasses) {
  const auto b = gbm(0.0, 17);
  const std::vector<DeterministicFn> phis{DeterministicFn::constant(1.0), DeterministicFn::dyadic(1.0, {1, -1}),
                                          DeterministicFn::sine(1, 1.0)};
  const std::vector<DeterministicFn> lambdas{DeterministicFn::constant(1.0), DeterministicFn::constant(-0.5),
                                             DeterministicFn::sine(2, 1.0)};
  const auto strong = strong_self_duality_test(b, "Y", phis, lambdas);
  EXPECT_TRUE(strong.pass) << strong.worst_row << " " << strong.max_abs_z;
  EXPECT_EQ(strong.rows.size(), 18u);
  const auto h = hphi_symmetry_test(b, "Y", phis, lambdas);
  EXPECT_TRUE(h.pass) << h.worst_row << " " << h.max_abs_z;
  EXPECT_EQ(h.rows.size(), 9u);
  const auto qv = ocone_qv_law_test(b, "Y", phis, {0.5, 1.0});
  EXPECT_TRUE(qv.pass);
  EXPECT_EQ(qv.extras.at("qphi_estimator"), "unnormalized");
  EXPECT_EQ(strong.extras.at("qphi_estimator"), "unnormalized");
}

TEST(PhiFamily, OconeVolatilityPasses) {
  const auto b = simulate_process(OconeSv{}, kGrid, kPaths, 23);
  const std::vector<DeterministicFn> phis{DeterministicFn::constant(1.0), DeterministicFn::dyadic(1.0, {0.5, -1})};
  const std::vector<DeterministicFn> lambdas{DeterministicFn::constant(1.0), DeterministicFn::sine(1, 1.0)};
  const auto strong = strong_self_duality_test(b, "M", phis, lambdas);
  EXPECT_TRUE(strong.pass) << strong.worst_row << " " << strong.max_abs_z;
  const auto qv = ocone_qv_law_test(b, "M", phis, {0.5, 1.0});
  EXPECT_TRUE(qv.pass) << qv.worst_row << " " << qv.max_abs_z;
  EXPECT_TRUE(qv.extras.contains("cvm"));
}

TEST(PhiFamily, CubicMartingaleFails) {
  const auto b = simulate_process(CubicBm{}, kGrid, kPaths, 29);
  const std::vector<DeterministicFn> phis{DeterministicFn::constant(1.0)};
  const std::vector<DeterministicFn> lambdas{DeterministicFn::constant(1.0), DeterministicFn::constant(0.5)};
  EXPECT_FALSE(strong_self_duality_test(b, "M", phis, lambdas).pass);
  EXPECT_FALSE(hphi_symmetry_test(b, "M", phis, lambdas).pass);
}

TEST(StrictLocal, CubicExponentialLosesMass) {
  StrictLocalOptions o;
  o.n_steps = {200};
  o.n_paths = 20000;
  const auto r = strict_local_diagnostic(o);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_TRUE(r.below_one);
  EXPECT_LT(r.rows.back().mean, 1.0);
  EXPECT_FALSE(r.caveat.empty());
}

TEST(CubicMartingale, ConditionalThirdMomentMatchesTheExpansion) {
  // E[(M_1 - M_{1/2})^3 | B_{1/2} = b] = 1.5 b^5 + 3.25 b^3 + 1.21875 b, so
  // E[B_{1/2} (M_1 - M_{1/2})^3] = 1.5 * 15/8 + 3.25 * 3/4 + 1.21875 / 2.
  const double oracle = 1.5 * 15.0 / 8.0 + 3.25 * 0.75 + 1.21875 * 0.5;
  const auto b = simulate_process(CubicBm{}, TimeGrid::uniform(1.0, 400), 40000, 37);
  const auto B = b.component_array("B"), M = b.component_array("M");
  const std::size_t pts = 401, mid = 200;
  std::vector<double> x(40000);
  for (std::size_t p = 0; p < x.size(); ++p) {
    const double d = M[p * pts + 400] - M[p * pts + mid];
    x[p] = B[p * pts + mid] * d * d * d;
  }
  double m = 0, ss = 0;
  for (double v : x) m += v;
  m /= x.size();
  for (double v : x) ss += (v - m) * (v - m);
  const double se = std::sqrt(ss / (x.size() - 1) / x.size());
  EXPECT_NEAR(m, oracle, 5.0 * se + 0.05);
}
