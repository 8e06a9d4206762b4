#pragma once

#include <string>
#include <variant>
#include <vector>

#include "sympath/time_grid.hpp"

namespace sympath {

/// Bounded deterministic function on [0, T].
class DeterministicFn {
 public:
  struct Constant {
    double value;
  };
  /// values[k] on [breaks[k-1], breaks[k]), right-continuous; breaks increasing.
  struct Steps {
    std::vector<double> breaks;
    std::vector<double> values;
  };
  /// amplitude * sin(k pi t / horizon)
  struct Sine {
    int k;
    double horizon;
    double amplitude = 1.0;
  };

  static DeterministicFn constant(double c);
  static DeterministicFn steps(std::vector<double> breaks, std::vector<double> values);
  /// Equal pieces of [0, T] with the given values.
  static DeterministicFn dyadic(double horizon, std::vector<double> values);
  static DeterministicFn sine(int k, double horizon, double amplitude = 1.0);

  double operator()(double t) const noexcept;
  double sup_abs() const noexcept { return sup_abs_; }
  const std::string& name() const noexcept { return name_; }

  /// Values at the left points t_0, ..., t_{n-1}.
  std::vector<double> on_grid(const TimeGrid& grid) const;

  DeterministicFn scaled(double factor) const;

 private:
  using Repr = std::variant<Constant, Steps, Sine>;
  DeterministicFn(Repr r, std::string name);
  Repr repr_;
  double sup_abs_;
  std::string name_;
};

/// Twelve integrands: values in {+-1, +-1/2} on the whole horizon, on dyadic
/// halves and on quarters, then sin(pi t / T) and sin(2 pi t / T).
std::vector<DeterministicFn> default_function_family(double horizon);

}  // namespace sympath
