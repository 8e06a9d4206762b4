#include "sympath/parallel.hpp"

#include <limits>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sympath {

void set_num_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int num_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<double> FeatureTable::column(std::size_t j) const {
  std::vector<double> out(n_rows_);
  for (std::size_t i = 0; i < n_rows_; ++i) out[i] = data_[i * n_cols_ + j];
  return out;
}

namespace detail {

void run_parallel_paths(const PathBundle& bundle, void* ctx, void (*fn)(void*, std::size_t, const PathBuffer&)) {
  const auto n = static_cast<std::ptrdiff_t>(bundle.n_paths());
  std::exception_ptr first_error;
  std::ptrdiff_t first_index = std::numeric_limits<std::ptrdiff_t>::max();
  std::mutex error_mutex;

#pragma omp parallel
  {
    PathBuffer buf = bundle.make_buffer();
#pragma omp for schedule(dynamic, 64)
    for (std::ptrdiff_t p = 0; p < n; ++p) {
      try {
        bundle.load(static_cast<std::size_t>(p), buf);
        fn(ctx, static_cast<std::size_t>(p), buf);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (p < first_index) {
          first_index = p;
          first_error = std::current_exception();
        }
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

double pairwise_sum(std::span<const double> values) noexcept {
  constexpr std::size_t kLeaf = 128;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace reference {

double naive_sum(std::span<const double> values) noexcept {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

}  // namespace reference
}  // namespace sympath
