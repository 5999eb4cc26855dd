// Serial reference vs OpenMP Monte-Carlo driver on the default scenario.
//
//   ./uavcov_bench --benchmark_counters_tabular=true

#include <benchmark/benchmark.h>

#include <omp.h>

#include "uavcov/montecarlo.hpp"

namespace {

void BM_SimulateSerial(benchmark::State& state) {
  uavcov::NetworkConfig c;
  c.n_uavs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(uavcov::simulate_serial(c, 200'000, 1));
  state.SetItemsProcessed(state.iterations() * 200'000);
}

void BM_SimulateOpenMP(benchmark::State& state) {
  uavcov::NetworkConfig c;
  c.n_uavs = static_cast<int>(state.range(0));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(uavcov::simulate(c, 200'000, 1));
  state.SetItemsProcessed(state.iterations() * 200'000);
  state.counters["threads"] = static_cast<double>(state.range(1));
}

void thread_args(benchmark::internal::Benchmark* b) {
  const int max_threads = omp_get_max_threads();
  for (int n : {10, 30})
    for (int t = 1; t <= max_threads; t *= 2) b->Args({n, t});
}

}  // namespace

BENCHMARK(BM_SimulateSerial)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateOpenMP)->Apply(thread_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
