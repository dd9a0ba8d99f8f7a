// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "noma/coop.hpp"
#include "noma/montecarlo.hpp"
#include "noma/simo.hpp"
#include "noma/specfun.hpp"

using namespace noma;

namespace {

CoopScenario relay(int m) {
  return CoopScenario::from_geometry(PowerAllocation({0.5, 1.0 / 3, 1.0 / 6}), SinrThresholds({0.9, 1.5, 2.0}),
                                     RelayGeometry(0.5, 3.0), m, m, SnrPoint::from_db(20.0));
}

SimoScenario simo(int m, int nr) {
  return SimoScenario(PowerAllocation({0.6, 0.4}), NakagamiSpec(m, 1.0), nr, SinrThresholds({1.0, 2.0}));
}

void BM_BesselKSequence(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::bessel_k_scaled_sequence(order, x));
    x = x < 50.0 ? x * 1.1 : 0.5;
  }
}
BENCHMARK(BM_BesselKSequence)->Arg(1)->Arg(8)->Arg(32);

void BM_IncompleteGamma(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::lower_incomplete_gamma_regularized(6.0, x));
    x = x < 30.0 ? x + 0.37 : 0.1;
  }
}
BENCHMARK(BM_IncompleteGamma);

void BM_SimoSeries(benchmark::State& state) {
  const auto s = simo(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(simo_outage_series(s, 1, SnrPoint::from_db(10.0)));
}
BENCHMARK(BM_SimoSeries)->Args({1, 1})->Args({2, 2})->Args({3, 3});

void BM_CoopSeries(benchmark::State& state) {
  const auto s = relay(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(coop_outage_closed_form(s, 1));
}
BENCHMARK(BM_CoopSeries)->DenseRange(1, 3);

void BM_CoopQuadrature(benchmark::State& state) {
  const auto s = relay(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(coop_outage_numeric(s, 1));
}
BENCHMARK(BM_CoopQuadrature)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_MonteCarloSimoOutage(benchmark::State& state) {
  const auto s = simo(2, 2);
  McConfig cfg;
  cfg.trials = 100'000;
  cfg.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_outage_all(s, SnrPoint::from_db(10.0), cfg));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cfg.trials));
}
BENCHMARK(BM_MonteCarloSimoOutage)->Unit(benchmark::kMillisecond);

void BM_MonteCarloCoopOutage(benchmark::State& state) {
  const auto s = relay(2);
  McConfig cfg;
  cfg.trials = 100'000;
  cfg.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_outage_all(s, cfg));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cfg.trials));
}
BENCHMARK(BM_MonteCarloCoopOutage)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
