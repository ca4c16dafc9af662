// OpenMP kernels against their serial references. Arg(1) is the parallel
// version, Arg(0) the serial one; threads come from OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "lilx/asymptotics.hpp"
#include "lilx/parallel.hpp"
#include "lilx/simulate.hpp"

using namespace lilx;

namespace {

void BM_UCdfGrid(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const std::vector<double> xs = linear_grid(-2.0, 8.0, 101);
  const LogIndex ix = LogIndex::from_log10(8.0);
  for (auto _ : state) {
    auto v = parallel ? u_cdf_exact_grid(ix, xs, Sided::One) : u_cdf_exact_grid_serial(ix, xs, Sided::One);
    benchmark::DoNotOptimize(v.data());
  }
  state.counters["threads"] = parallel ? parallel_threads() : 1;
}

void BM_TailSupBatch(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const TailSupSampler sampler(1000, TailSupSampler::default_cut(1000));
  for (auto _ : state) {
    auto v = parallel ? sample_tail_sup_batch(sampler, 42, 2000) : sample_tail_sup_batch_serial(sampler, 42, 2000);
    benchmark::DoNotOptimize(v.data());
  }
  state.counters["threads"] = parallel ? parallel_threads() : 1;
}

void BM_RandomWalkBatch(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto v = parallel ? random_walk_batch(1000, 100000, 42, 64) : random_walk_batch_serial(1000, 100000, 42, 64);
    benchmark::DoNotOptimize(v.data());
  }
  state.counters["threads"] = parallel ? parallel_threads() : 1;
}

}  // namespace

BENCHMARK(BM_UCdfGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TailSupBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RandomWalkBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
