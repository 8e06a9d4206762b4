#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace sympath {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Output is a pure function of (key, counter), so any path can be
/// regenerated independently of the others.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key) noexcept;
};

/// Substream identifiers. Restart sub-simulations use `restart_component`
/// so they never collide with the primary drivers of the same path.
struct StreamId {
  std::uint64_t seed = 0;
  std::uint64_t path = 0;
  std::uint32_t component = 0;
};

std::uint32_t restart_component(std::uint32_t component, std::uint32_t restart) noexcept;

/// Sequential standard-normal draws (Box-Muller on 53-bit uniforms) from the
/// substream keyed by `id`.
class NormalStream {
 public:
  explicit NormalStream(StreamId id) noexcept;

  double next() noexcept;
  void fill(std::span<double> out) noexcept;

 private:
  void refill() noexcept;

  Philox4x32::Key key_;
  Philox4x32::Counter ctr_;
  double cache_ = 0.0;
  double cache_cos_ = 0.0;
  bool has_cache_ = false;
};

/// Uniform [0, 1) draws from a substream (used by bootstrap and coin fixtures).
class UniformStream {
 public:
  explicit UniformStream(StreamId id) noexcept;
  double next() noexcept;
  std::uint64_t next_u64() noexcept;

 private:
  Philox4x32::Key key_;
  Philox4x32::Counter ctr_;
  Philox4x32::Counter block_{};
  int used_ = 4;
};

}  // namespace sympath
