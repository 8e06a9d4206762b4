#include <gtest/gtest.h>

#include <cmath>

#include "sympath/error.hpp"
#include "sympath/hedge.hpp"
#include "sympath/simulate.hpp"

using namespace sympath;

namespace {
const TimeGrid kGrid = TimeGrid::uniform(1.0, 200);
constexpr std::size_t kPaths = 40000;
}

TEST(PriceEuropean, ConstantAndAtmCall) {
  const auto b = simulate_process(Gbm{}, kGrid, kPaths, 2);
  const auto one = price_european(b, [](double) { return 1.0; });
  EXPECT_DOUBLE_EQ(one.value, 1.0);
  EXPECT_EQ(one.se, 0.0);
  // 2 N(sigma / 2) - 1 for sigma = 0.2, T = 1.
  const auto call = price_european(b, [](double s) { return std::max(s - 1.0, 0.0); });
  EXPECT_NEAR(call.value, 0.07965567455405798, 4.0 * call.se);
}

TEST(HedgeLeg, DependsOnlyOnTheContract) {
  const BarrierContract c{1.1, 1.2, 1.0};
  const auto leg = hedge_leg(c);
  EXPECT_DOUBLE_EQ(leg.quantity, 1.1 / 1.2);
  EXPECT_DOUBLE_EQ(leg.strike, 1.44 / 1.1);
  EXPECT_FALSE(leg.description.empty());
  EXPECT_THROW(hedge_leg(BarrierContract{1.3, 1.2, 1.0}), InvalidArgument);
  EXPECT_THROW(hedge_leg(BarrierContract{-1.0, 1.2, 1.0}), InvalidArgument);
}

TEST(SemiStaticHedge, ReplicatesUnderSelfDuality) {
  const auto b = simulate_process(Gbm{}, kGrid, kPaths, 3);
  const auto r = semi_static_hedge(b, BarrierContract{});
  EXPECT_TRUE(r.pass) << r.z << " " << r.swap_rows.worst_row;
  EXPECT_GT(r.n_hit, kPaths / 5);
  EXPECT_LT(std::abs(r.z), 4.0);
  EXPECT_TRUE(r.swap_rows.find("identity") != nullptr);
  const auto atm = semi_static_hedge(b, BarrierContract{1.2, 1.2, 1.0});
  EXPECT_TRUE(atm.pass) << atm.z;
}

TEST(SemiStaticHedge, FailsWithDrift) {
  const auto b = simulate_process(Gbm{0.2, 0.05, 1.0}, kGrid, kPaths, 3);
  const auto r = semi_static_hedge(b, BarrierContract{});
  EXPECT_FALSE(r.pass);
  EXPECT_GT(std::abs(r.z), 4.0);
  // The order-adjusted leg restores the identity.
  const auto p = power_hedge_demo(b, BarrierContract{}, -1.5);
  EXPECT_TRUE(p.pass) << p.z << " " << p.swap_rows.worst_row;
}

TEST(SemiStaticHedge, BarrierPriceIncreasesWithVolatility) {
  const auto lo = semi_static_hedge(simulate_process(Gbm{0.15, 0.0, 1.0}, kGrid, kPaths, 9), BarrierContract{});
  const auto hi = semi_static_hedge(simulate_process(Gbm{0.3, 0.0, 1.0}, kGrid, kPaths, 9), BarrierContract{});
  EXPECT_GT(hi.barrier_price.value, lo.barrier_price.value + 4.0 * hi.barrier_price.se);
}

TEST(SemiStaticHedge, RejectsMismatchedMaturity) {
  const auto b = simulate_process(Gbm{}, kGrid, 100, 1);
  EXPECT_THROW(semi_static_hedge(b, BarrierContract{1.1, 1.2, 2.0}), InvalidArgument);
}
