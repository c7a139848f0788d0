#include <benchmark/benchmark.h>

#include "mcdelay/channel.hpp"
#include "mcdelay/queue_sim.hpp"

namespace {

using mcdelay::SystemConfig;

void BM_SampleMinGain(benchmark::State& state) {
  const SystemConfig cfg(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 10.0);
  mcdelay::StreamRng rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(mcdelay::channel::sample_min_gain(cfg, rng));
}
BENCHMARK(BM_SampleMinGain)->Args({1, 1})->Args({5, 10})->Args({10, 100});

void BM_SimulateReplication(benchmark::State& state) {
  const SystemConfig cfg = SystemConfig::from_db(5, 10, 10.0);
  const auto arr = mcdelay::ArrivalSpec::from_rate_bps(110e3, 2e-3);
  auto sc = mcdelay::sim::SimConfig::with_defaults(cfg, arr, state.range(0), 1, 1);
  sc.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(mcdelay::sim::simulate(sc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateReplication)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
