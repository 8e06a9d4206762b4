#include "sympath/time_grid.hpp"

#include <cmath>
#include <string>

#include "sympath/error.hpp"

namespace sympath {

TimeGrid::TimeGrid(double horizon, std::size_t n_steps)
    : horizon_(horizon), n_steps_(n_steps), step_(horizon / static_cast<double>(n_steps)) {}

TimeGrid TimeGrid::uniform(double horizon, std::size_t n_steps) {
  SYMPATH_REQUIRE(std::isfinite(horizon) && horizon > 0.0, "time grid: horizon must be finite and > 0");
  SYMPATH_REQUIRE(n_steps >= 1, "time grid: n_steps must be >= 1");
  return TimeGrid(horizon, n_steps);
}

double TimeGrid::time(std::size_t i) const noexcept {
  if (i >= n_steps_) return horizon_;
  return horizon_ * static_cast<double>(i) / static_cast<double>(n_steps_);
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = time(i);
  return out;
}

std::size_t TimeGrid::index_at_or_before(double t) const {
  if (!(t >= 0.0 && t <= horizon_)) {
    throw InvalidArgument("time " + std::to_string(t) + " outside [0, T]");
  }
  auto k = static_cast<std::size_t>(std::floor(t / horizon_ * static_cast<double>(n_steps_)));
  if (k > n_steps_) k = n_steps_;
  while (k < n_steps_ && time(k + 1) <= t) ++k;
  while (k > 0 && time(k) > t) --k;
  return k;
}

}  // namespace sympath
