#include <gtest/gtest.h>

#include "sympath/error.hpp"
#include "sympath/harness.hpp"
#include "sympath/simulate.hpp"

using namespace sympath;

namespace {
const TimeGrid kGrid = TimeGrid::uniform(1.0, 50);
}

TEST(EstimateOrder, DriftedGbm) {
  // alpha = 1 - 2 lambda / sigma^2.
  for (auto [lambda, alpha] : {std::pair{0.05, -1.5}, std::pair{0.1, -4.0}}) {
    const auto b = simulate_process(Gbm{0.2, lambda, 1.0}, kGrid, 50000, 12);
    const auto e = estimate_order(b);
    EXPECT_NEAR(e.alpha, alpha, 0.15 * std::abs(alpha)) << lambda;
    EXPECT_LT(e.ci_lo, e.alpha);
    EXPECT_GT(e.ci_hi, e.alpha);
    EXPECT_LT(e.ci_hi - e.ci_lo, 0.3 * std::abs(alpha));
    EXPECT_EQ(e.bootstrap_used, 100u);
  }
}

TEST(EstimateOrder, ReproducibleAndQsdLiftAgrees) {
  const auto lift = simulate_process(make_qsd_lift(Gbm{0.2, 0.0, 1.0}, 1.25), kGrid, 20000, 4);
  const auto a = estimate_order(lift);
  const auto b = estimate_order(lift);
  EXPECT_EQ(a.alpha, b.alpha);
  EXPECT_EQ(a.ci_lo, b.ci_lo);
  EXPECT_NEAR(a.alpha, qsd_order(1.25), 0.2);
}

TEST(EstimateOrder, MartingaleReturnsOne) {
  const auto b = simulate_process(Gbm{0.2, 0.0, 1.0}, kGrid, 20000, 6);
  OrderOptions o;
  o.bootstrap = 20;
  const auto e = estimate_order(b, "S", o);
  EXPECT_NEAR(e.alpha, 1.0, 0.2);
}

TEST(EstimateOrder, NoRootRaises) {
  const TimeGrid g = TimeGrid::uniform(1.0, 1);
  const auto up = PathBundle::from_arrays(g, {"S"}, {{1.0, 1.5, 1.0, 2.0, 1.0, 1.2}});
  EXPECT_THROW(estimate_order(up), NoOrderFound);
  OrderOptions bad;
  bad.lo = 1.0;
  bad.hi = -1.0;
  EXPECT_THROW(estimate_order(up, "S", bad), InvalidArgument);
}
