#include "sympath/rng.hpp"

#include <cmath>
#include <numbers>

namespace sympath {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

Philox4x32::Key make_key(std::uint64_t seed) noexcept {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

Philox4x32::Counter make_counter(const StreamId& id) noexcept {
  // c0 = block index, c1 = component, c2/c3 = path
  return {0u, id.component, static_cast<std::uint32_t>(id.path), static_cast<std::uint32_t>(id.path >> 32)};
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::uint32_t restart_component(std::uint32_t component, std::uint32_t restart) noexcept {
  return component + 16u * (restart + 1u);
}

NormalStream::NormalStream(StreamId id) noexcept : key_(make_key(id.seed)), ctr_(make_counter(id)) {}

void NormalStream::refill() noexcept {
  const auto out = Philox4x32::generate(ctr_, key_);
  ++ctr_[0];
  const double u1 = 1.0 - to_unit(out[0], out[1]);  // (0, 1]
  const double u2 = to_unit(out[2], out[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cache_ = r * std::sin(angle);
  has_cache_ = true;
  // cos branch returned by next()
  cache_cos_ = r * std::cos(angle);
}

double NormalStream::next() noexcept {
  if (has_cache_) {
    has_cache_ = false;
    return cache_;
  }
  refill();
  return cache_cos_;
}

void NormalStream::fill(std::span<double> out) noexcept {
  for (double& z : out) z = next();
}

UniformStream::UniformStream(StreamId id) noexcept : key_(make_key(id.seed)), ctr_(make_counter(id)) {}

std::uint64_t UniformStream::next_u64() noexcept {
  if (used_ >= 4) {
    block_ = Philox4x32::generate(ctr_, key_);
    ++ctr_[0];
    used_ = 0;
  }
  const std::uint64_t v = (static_cast<std::uint64_t>(block_[used_]) << 32) | block_[used_ + 1];
  used_ += 2;
  return v;
}

double UniformStream::next() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

}  // namespace sympath
