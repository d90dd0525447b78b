#include <benchmark/benchmark.h>

#include "lhv/analysis.hpp"
#include "lhv/integration.hpp"

namespace {

const lhv::Setting kSetting(lhv::kPi / 6.0, lhv::kPi / 3.0);
const lhv::ModelParams kParams = lhv::ModelParams::make(0.5, 1.0, 0.05);

void BM_ClosedForm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lhv::compute_p12_closed_form(kSetting, kParams));
}
BENCHMARK(BM_ClosedForm);

void BM_Quadrature(benchmark::State& state) {
  const lhv::QuadratureSpec quad{static_cast<int>(state.range(0)), static_cast<int>(2 * state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(lhv::compute_p12_quadrature(kSetting, kParams, quad));
}
BENCHMARK(BM_Quadrature)->Arg(4)->Arg(8)->Arg(16);

void BM_Sampler(benchmark::State& state) {
  lhv::RandomStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(lhv::sample_hidden_pair(rng, kParams.phi()));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Sampler);

void BM_MonteCarlo(benchmark::State& state) {
  const lhv::McSpec mc{static_cast<std::uint64_t>(state.range(0)), 42, 4};
  for (auto _ : state) benchmark::DoNotOptimize(lhv::estimate_p12_mc(kSetting, kParams, mc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_SumRuleResidual(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(lhv::fair_sampling_residual(0.3, 0.7, 1.1, kParams));
}
BENCHMARK(BM_SumRuleResidual);

}  // namespace

BENCHMARK_MAIN();
