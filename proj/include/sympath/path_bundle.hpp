#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sympath/process_spec.hpp"
#include "sympath/time_grid.hpp"

namespace sympath {

/// All components of one path, laid out component-major with stride n+1.
class PathBuffer {
 public:
  PathBuffer() = default;
  PathBuffer(std::size_t n_components, std::size_t n_points)
      : n_points_(n_points), data_(n_components * n_points) {}

  std::size_t n_components() const noexcept { return n_points_ ? data_.size() / n_points_ : 0; }
  std::size_t n_points() const noexcept { return n_points_; }

  std::span<double> component(std::size_t c) noexcept { return {data_.data() + c * n_points_, n_points_}; }
  std::span<const double> component(std::size_t c) const noexcept {
    return {data_.data() + c * n_points_, n_points_};
  }

  /// Scratch space for generators (normal draws etc.); not part of the path.
  std::vector<double>& scratch() noexcept { return scratch_; }

 private:
  std::size_t n_points_ = 0;
  std::vector<double> data_;
  std::vector<double> scratch_;
};

/// Writes base components of path `path` into the buffer.
using PathGenerator = std::function<void(std::size_t path, PathBuffer& out)>;

/// Computes one derived component from the components before it.
using PathDerivation = std::function<void(const PathBuffer& in, std::span<double> out)>;

/// N paths on a grid. Immutable; copies share state. Paths are either stored
/// or regenerated on demand from (source, seed, path index), which yields
/// bit-identical values either way.
class PathBundle {
 public:
  PathBundle(TimeGrid grid, std::size_t n_paths, std::uint64_t seed, std::string label,
             std::vector<std::string> components, PathGenerator generator,
             std::optional<ProcessSpec> spec = std::nullopt);

  /// Bundle over explicit arrays, one N x (n+1) row-major array per component.
  static PathBundle from_arrays(TimeGrid grid, std::vector<std::string> components,
                                const std::vector<std::vector<double>>& arrays, std::string label = "fixture");

  const TimeGrid& grid() const noexcept;
  std::size_t n_paths() const noexcept;
  std::uint64_t seed() const noexcept;
  const std::string& label() const noexcept;
  const std::optional<ProcessSpec>& spec() const noexcept;
  const std::vector<std::string>& components() const noexcept;

  bool has_component(std::string_view name) const noexcept;
  /// Throws InvalidArgument when the name is unknown.
  std::size_t component_index(std::string_view name) const;

  PathBuffer make_buffer() const;
  /// Fills `buf` with every component (base and derived) of path `path`.
  void load(std::size_t path, PathBuffer& buf) const;

  /// New bundle sharing this one's paths, with an extra pathwise component.
  PathBundle with_component(std::string name, PathDerivation derivation) const;

  /// Stores every path; subsequent loads copy instead of regenerating.
  PathBundle materialize() const;
  bool materialized() const noexcept;

  /// Copy of all values of one component, N x (n+1) row-major. Small N only.
  std::vector<double> component_array(std::string_view name) const;

 private:
  struct Impl;
  explicit PathBundle(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace sympath
