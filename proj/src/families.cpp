#include "sympath/families.hpp"

#include <algorithm>
#include <cmath>

#include "sympath/error.hpp"
#include "sympath/json_io.hpp"

namespace sympath {

double Payoff::operator()(double x) const noexcept {
  switch (kind) {
    case Kind::Abs: return std::abs(x);
    case Kind::Square: return x * x;
    case Kind::Call: return std::max(x - strike, 0.0);
    case Kind::CubePos: return x > 0 ? x * x * x : 0.0;
    case Kind::CubeNeg: return x < 0 ? -x * x * x : 0.0;
  }
  return 0.0;
}

std::string Payoff::name() const {
  switch (kind) {
    case Kind::Abs: return "abs";
    case Kind::Square: return "sq";
    case Kind::Call: return "call(" + fmt(strike) + ")";
    case Kind::CubePos: return "cube+";
    case Kind::CubeNeg: return "cube-";
  }
  return "?";
}

std::vector<Payoff> default_payoffs() {
  return {Payoff::abs(), Payoff::square(), Payoff::call(-0.1), Payoff::call(0.0), Payoff::call(0.1)};
}

std::vector<Payoff> cube_payoffs() { return {Payoff::cube_pos(), Payoff::cube_neg()}; }

namespace {

void assign(std::span<const double> stat, BinAssignment& b) {
  b.bin.resize(stat.size());
  b.counts.assign(b.edges.size() + 1, 0);
  for (std::size_t i = 0; i < stat.size(); ++i) {
    const auto k = static_cast<std::uint16_t>(std::upper_bound(b.edges.begin(), b.edges.end(), stat[i]) - b.edges.begin());
    b.bin[i] = k;
    ++b.counts[k];
  }
}

}  // namespace

BinAssignment quantile_bins(std::span<const double> stat, std::size_t n_bins) {
  SYMPATH_REQUIRE(n_bins >= 1 && n_bins < 65535, "quantile_bins: bad bin count");
  SYMPATH_REQUIRE(!stat.empty(), "quantile_bins: empty sample");
  for (double v : stat) SYMPATH_REQUIRE(!std::isnan(v), "quantile_bins: NaN statistic");
  std::vector<double> sorted(stat.begin(), stat.end());
  std::sort(sorted.begin(), sorted.end());
  BinAssignment b;
  std::vector<double> raw;
  for (std::size_t k = 1; k < n_bins; ++k) raw.push_back(sorted[k * sorted.size() / n_bins]);
  b.edges = raw;
  b.edges.erase(std::unique(b.edges.begin(), b.edges.end()), b.edges.end());
  // A leading edge equal to the minimum leaves bin 0 empty.
  if (!b.edges.empty() && b.edges.front() <= sorted.front()) b.edges.erase(b.edges.begin());
  b.merged = (n_bins - 1) - b.edges.size();
  assign(stat, b);
  return b;
}

Multipliers make_multipliers(std::span<const double> stat, const Conditioning& cond) {
  Multipliers m;
  const std::size_t n = stat.size();
  if (cond.include_constant) {
    m.names.push_back("1");
    m.values.emplace_back(n, 1.0);
  }
  if (cond.n_bins > 1) {
    m.bins = quantile_bins(stat, cond.n_bins);
    for (std::size_t k = 0; k < m.bins.n_bins(); ++k) {
      m.names.push_back("bin" + std::to_string(k));
      std::vector<double> g(n);
      for (std::size_t i = 0; i < n; ++i) g[i] = m.bins.bin[i] == k ? 1.0 : 0.0;
      m.values.push_back(std::move(g));
    }
  }
  SYMPATH_REQUIRE(!m.values.empty(), "conditioning: no multipliers (need bins or the constant)");
  return m;
}

}  // namespace sympath
