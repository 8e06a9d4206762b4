#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sympath {

/// Payoff f applied to an increment x. Signed CubePos/CubeNeg split x^3.
struct Payoff {
  enum class Kind { Abs, Square, Call, CubePos, CubeNeg };
  Kind kind = Kind::Abs;
  double strike = 0.0;

  double operator()(double x) const noexcept;
  std::string name() const;

  static Payoff abs() { return {Kind::Abs, 0.0}; }
  static Payoff square() { return {Kind::Square, 0.0}; }
  static Payoff call(double k) { return {Kind::Call, k}; }
  static Payoff cube_pos() { return {Kind::CubePos, 0.0}; }
  static Payoff cube_neg() { return {Kind::CubeNeg, 0.0}; }
};

/// |x|, x^2, (x-k)+ for k in {-0.1, 0, 0.1}.
std::vector<Payoff> default_payoffs();
/// (x+)^3 and (x-)^3.
std::vector<Payoff> cube_payoffs();

enum class ConditioningStat {
  ValueAtTau,  ///< value of the conditioning component at tau
  StoppingTime ///< the time tau itself
};

struct Conditioning {
  /// Empty means the component under test.
  std::string component;
  ConditioningStat stat = ConditioningStat::ValueAtTau;
  std::size_t n_bins = 8;
  bool include_constant = true;
};

struct TestFunctionFamily {
  std::vector<Payoff> payoffs = default_payoffs();
  Conditioning conditioning;
};

/// Quantile bins of a statistic. Bins are [e_{k-1}, e_k); duplicate edges
/// from ties are merged so that every bin is non-empty.
struct BinAssignment {
  std::vector<double> edges;
  std::vector<std::uint16_t> bin;
  std::vector<std::size_t> counts;
  std::size_t merged = 0;
  std::size_t n_bins() const noexcept { return counts.size(); }
};

BinAssignment quantile_bins(std::span<const double> stat, std::size_t n_bins);

/// The F_tau-measurable multipliers g: optionally the constant 1, then one
/// indicator per bin.
struct Multipliers {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
  BinAssignment bins;
};

Multipliers make_multipliers(std::span<const double> stat, const Conditioning& cond);

}  // namespace sympath
