// Serial reference vs OpenMP ensemble runner.

#include <benchmark/benchmark.h>

#include "regret_floor/experiment.hpp"

namespace {

regret_floor::ExperimentConfig bench_config(std::int64_t horizon) {
  regret_floor::ExperimentConfig c;
  c.horizon = static_cast<std::uint64_t>(horizon);
  return c;
}

void BM_Serial(benchmark::State& state) {
  const auto c = bench_config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(regret_floor::run_traces_serial(c, 32));
  state.SetItemsProcessed(state.iterations() * 32 * state.range(0));
}

void BM_OpenMP(benchmark::State& state) {
  const auto c = bench_config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(regret_floor::run_traces(c, 32));
  state.SetItemsProcessed(state.iterations() * 32 * state.range(0));
}

void BM_SingleRunStep(benchmark::State& state) {
  const auto c = bench_config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(regret_floor::run_single(c, 0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OpenMP)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SingleRunStep)->Arg(100'000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
