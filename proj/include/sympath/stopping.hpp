#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sympath/path_bundle.hpp"
#include "sympath/time_grid.hpp"

namespace sympath {

struct DeterministicTime {
  double t = 0.0;
};

enum class Direction { Up, Down };

/// First grid index at which `component` is >= level (Up) or <= level (Down),
/// monitored up to `cap` (default T); the cap index if never.
struct BarrierHit {
  std::string component;
  double level = 0.0;
  Direction direction = Direction::Up;
  std::optional<double> cap{};
};

using StoppingRule = std::variant<DeterministicTime, BarrierHit>;

std::string describe(const StoppingRule& rule);

/// Stopping index for one path. `values` is the rule's component (ignored for
/// deterministic rules). Only values at indices <= the result are read.
std::size_t stopping_index(const StoppingRule& rule, const TimeGrid& grid, std::span<const double> values);

/// Resolves the rule's component index in `bundle` (or nullopt for
/// deterministic rules). Throws InvalidArgument for unknown names.
std::optional<std::size_t> rule_component(const PathBundle& bundle, const StoppingRule& rule);

/// Per-path stopping indices over the bundle.
std::vector<std::size_t> evaluate_stopping(const PathBundle& bundle, const StoppingRule& rule);

}  // namespace sympath
