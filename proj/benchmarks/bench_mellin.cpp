#include <benchmark/benchmark.h>

#include "mcdelay/mellin.hpp"
#include "mcdelay/snc.hpp"
#include "mcdelay/specfun.hpp"

namespace {

using mcdelay::SystemConfig;

void BM_TricomiU(benchmark::State& state) {
  const double a = static_cast<double>(state.range(0)) + 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mcdelay::specfun::log_tricomi_integral(a, a - 3.5, 2.5));
  }
}
BENCHMARK(BM_TricomiU)->Arg(0)->Arg(10)->Arg(100);

void BM_MellinQuadrature(benchmark::State& state) {
  const SystemConfig cfg = SystemConfig::from_db(static_cast<int>(state.range(0)),
                                                 static_cast<int>(state.range(1)), 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(mcdelay::mellin_quadrature(cfg, -2.0).value);
}
BENCHMARK(BM_MellinQuadrature)->Args({2, 4})->Args({5, 10})->Args({10, 100});

void BM_MellinExactSeries(benchmark::State& state) {
  const SystemConfig cfg = SystemConfig::from_db(static_cast<int>(state.range(0)),
                                                 static_cast<int>(state.range(1)), 10.0);
  const mcdelay::ExactMellinSeries series(cfg, 10'000'000);
  for (auto _ : state) benchmark::DoNotOptimize(series.evaluate(-2.0).value);
}
BENCHMARK(BM_MellinExactSeries)->Args({2, 4})->Args({5, 10});

void BM_MellinExactSetup(benchmark::State& state) {
  const SystemConfig cfg = SystemConfig::from_db(static_cast<int>(state.range(0)),
                                                 static_cast<int>(state.range(1)), 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(mcdelay::ExactMellinSeries(cfg, 10'000'000));
}
BENCHMARK(BM_MellinExactSetup)->Args({5, 10})->Args({6, 30});

void BM_MellinAlzer(benchmark::State& state) {
  const SystemConfig cfg = SystemConfig::from_db(4, 8, 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(mcdelay::mellin_alzer_bounds(cfg, 0.5));
}
BENCHMARK(BM_MellinAlzer);

void BM_MellinAsymptotic(benchmark::State& state) {
  const SystemConfig cfg = SystemConfig::from_db(10, 100, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(mcdelay::mellin_asymptotic(cfg, -2.0).value);
}
BENCHMARK(BM_MellinAsymptotic);

void BM_DelayBoundSweep(benchmark::State& state) {
  const SystemConfig cfg = SystemConfig::from_db(5, 10, 10.0);
  const auto arr = mcdelay::ArrivalSpec::from_rate_bps(100e3, 2e-3);
  std::vector<int> ws;
  for (int w = 1; w <= 20; ++w) ws.push_back(w);
  for (auto _ : state) {
    const mcdelay::DelayAnalyzer an(cfg, arr, mcdelay::MellinMethod::Exact);
    benchmark::DoNotOptimize(an.delay_bounds(ws));
  }
}
BENCHMARK(BM_DelayBoundSweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
