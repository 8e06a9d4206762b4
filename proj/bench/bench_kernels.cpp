// Parallel kernels against the serial reference on identical inputs.
#include <benchmark/benchmark.h>

#include <cmath>

#include "sympath/parallel.hpp"
#include "sympath/rng.hpp"
#include "sympath/simulate.hpp"

using namespace sympath;

namespace {

const PathBundle& bundle() {
  static const PathBundle b = simulate_process(Gbm{}, TimeGrid::uniform(1.0, 250), 20000, 1);
  return b;
}

void terminal_log(std::size_t, const PathBuffer& buf, std::span<double> row) {
  const auto s = buf.component(4);
  row[0] = std::log(s.back() / s.front());
  double mx = s.front();
  for (double x : s) mx = std::max(mx, x);
  row[1] = mx;
}

void BM_ExtractParallel(benchmark::State& st) {
  set_num_threads(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(extract_features(bundle(), 2, terminal_log));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(bundle().n_paths()));
}

void BM_ExtractReference(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(reference::extract_features(bundle(), 2, terminal_log));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(bundle().n_paths()));
}

std::vector<double> values(std::size_t n) {
  std::vector<double> v(n);
  UniformStream u(StreamId{9, 0, 0});
  for (double& x : v) x = u.next();
  return v;
}

void BM_PairwiseSum(benchmark::State& st) {
  const auto v = values(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(pairwise_sum(v));
}

void BM_NaiveSum(benchmark::State& st) {
  const auto v = values(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::naive_sum(v));
}

}  // namespace

BENCHMARK(BM_ExtractParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairwiseSum)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_NaiveSum)->Arg(1 << 16)->Arg(1 << 20);

BENCHMARK_MAIN();
