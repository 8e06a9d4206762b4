#include "sympath/stopping.hpp"

#include <cmath>
#include <sstream>

#include "sympath/error.hpp"
#include "sympath/parallel.hpp"

namespace sympath {

std::string describe(const StoppingRule& rule) {
  std::ostringstream os;
  if (const auto* d = std::get_if<DeterministicTime>(&rule)) {
    os << "t=" << d->t;
  } else {
    const auto& b = std::get<BarrierHit>(rule);
    os << "hit(" << b.component << (b.direction == Direction::Up ? ">=" : "<=") << b.level;
    if (b.cap) os << ",cap=" << *b.cap;
    os << ")";
  }
  return os.str();
}

std::size_t stopping_index(const StoppingRule& rule, const TimeGrid& grid, std::span<const double> values) {
  if (const auto* d = std::get_if<DeterministicTime>(&rule)) return grid.index_at_or_before(d->t);
  const auto& b = std::get<BarrierHit>(rule);
  const std::size_t cap = b.cap ? grid.index_at_or_before(*b.cap) : grid.n_steps();
  for (std::size_t i = 0; i <= cap; ++i) {
    const bool crossed = b.direction == Direction::Up ? values[i] >= b.level : values[i] <= b.level;
    if (crossed) return i;
  }
  return cap;
}

std::optional<std::size_t> rule_component(const PathBundle& bundle, const StoppingRule& rule) {
  if (const auto* d = std::get_if<DeterministicTime>(&rule)) {
    (void)bundle.grid().index_at_or_before(d->t);
    return std::nullopt;
  }
  const auto& b = std::get<BarrierHit>(rule);
  SYMPATH_REQUIRE(std::isfinite(b.level), "barrier level must be finite");
  if (b.cap) (void)bundle.grid().index_at_or_before(*b.cap);
  return bundle.component_index(b.component);
}

std::vector<std::size_t> evaluate_stopping(const PathBundle& bundle, const StoppingRule& rule) {
  const auto comp = rule_component(bundle, rule);
  std::vector<std::size_t> out(bundle.n_paths());
  if (!comp) {
    std::fill(out.begin(), out.end(), stopping_index(rule, bundle.grid(), {}));
    return out;
  }
  for_each_path(bundle, [&](std::size_t p, const PathBuffer& buf) {
    out[p] = stopping_index(rule, bundle.grid(), buf.component(*comp));
  });
  return out;
}

}  // namespace sympath
