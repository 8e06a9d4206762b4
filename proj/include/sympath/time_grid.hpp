#pragma once

#include <cstddef>
#include <vector>

namespace sympath {

/// Uniform partition 0 = t_0 < ... < t_n = T of the horizon.
class TimeGrid {
 public:
  static TimeGrid uniform(double horizon, std::size_t n_steps);

  double horizon() const noexcept { return horizon_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  std::size_t size() const noexcept { return n_steps_ + 1; }
  double step() const noexcept { return step_; }

  /// t_i, with t_0 == 0 and t_n == T exactly.
  double time(std::size_t i) const noexcept;
  std::vector<double> times() const;

  /// Largest index i with t_i <= t. Requires t in [0, T].
  std::size_t index_at_or_before(double t) const;

  bool operator==(const TimeGrid&) const = default;

 private:
  TimeGrid(double horizon, std::size_t n_steps);
  double horizon_;
  std::size_t n_steps_;
  double step_;
};

}  // namespace sympath
