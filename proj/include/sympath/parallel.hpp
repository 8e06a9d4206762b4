#pragma once

// Path-parallel kernels. Every kernel writes per-path results into its own
// slot, and reductions use a fixed block partition, so results do not depend
// on the number of OpenMP threads.

#include <cstddef>
#include <exception>
#include <span>
#include <type_traits>
#include <vector>

#include "sympath/path_bundle.hpp"

namespace sympath {

void set_num_threads(int n);
int num_threads();

/// Per-path feature rows, row-major N x n_cols.
class FeatureTable {
 public:
  FeatureTable() = default;
  FeatureTable(std::size_t n_rows, std::size_t n_cols) : n_rows_(n_rows), n_cols_(n_cols), data_(n_rows * n_cols) {}

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return n_cols_; }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * n_cols_, n_cols_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_cols_, n_cols_}; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_cols_ + j]; }
  std::vector<double> column(std::size_t j) const;

  bool operator==(const FeatureTable&) const = default;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<double> data_;
};

namespace detail {
void run_parallel_paths(const PathBundle& bundle, void* ctx,
                        void (*fn)(void*, std::size_t, const PathBuffer&));
}

/// Calls fn(path, buffer) for every path, in parallel. Exceptions are
/// rethrown deterministically (the one from the lowest path index).
template <class Fn>
void for_each_path(const PathBundle& bundle, Fn&& fn) {
  detail::run_parallel_paths(bundle, &fn, [](void* ctx, std::size_t p, const PathBuffer& buf) {
    (*static_cast<std::remove_reference_t<Fn>*>(ctx))(p, buf);
  });
}

/// Runs `kernel(path, buffer, row)` over all paths into an N x n_cols table.
template <class Kernel>
FeatureTable extract_features(const PathBundle& bundle, std::size_t n_cols, Kernel&& kernel) {
  FeatureTable table(bundle.n_paths(), n_cols);
  for_each_path(bundle, [&](std::size_t p, const PathBuffer& buf) { kernel(p, buf, table.row(p)); });
  return table;
}

/// Pairwise (cascade) summation; fixed order, independent of thread count.
double pairwise_sum(std::span<const double> values) noexcept;

namespace reference {

/// Serial reference of for_each_path / extract_features, kept for tests and
/// benchmarks.
template <class Fn>
void for_each_path(const PathBundle& bundle, Fn&& fn) {
  PathBuffer buf = bundle.make_buffer();
  for (std::size_t p = 0; p < bundle.n_paths(); ++p) {
    bundle.load(p, buf);
    fn(p, buf);
  }
}

template <class Kernel>
FeatureTable extract_features(const PathBundle& bundle, std::size_t n_cols, Kernel&& kernel) {
  FeatureTable table(bundle.n_paths(), n_cols);
  reference::for_each_path(bundle, [&](std::size_t p, const PathBuffer& buf) { kernel(p, buf, table.row(p)); });
  return table;
}

/// Plain left-to-right sum.
double naive_sum(std::span<const double> values) noexcept;

}  // namespace reference
}  // namespace sympath
