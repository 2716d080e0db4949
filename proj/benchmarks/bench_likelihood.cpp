#include <benchmark/benchmark.h>

#include <vector>

#include "generators.hpp"
#include "stablepower/adversarial.hpp"
#include "stablepower/dataset.hpp"
#include "stablepower/likelihood.hpp"
#include "stablepower/optimize.hpp"

namespace {

using namespace stablepower;
using stablepower::testing::Gen;

Dataset positive_data(std::size_t n) {
  Gen g(11);
  return Dataset(g.log_uniform_vector(n, 1e-2, 1e2));
}

void BM_NllBoxCox(benchmark::State& state, Engine engine) {
  const Dataset d = positive_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nll(d, TransformKind::BoxCox, 2.0, engine));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_NllBoxCox, stable, Engine::Stable)->RangeMultiplier(10)->Range(100, 100000);
BENCHMARK_CAPTURE(BM_NllBoxCox, linear, Engine::Linear)->RangeMultiplier(10)->Range(100, 100000);

void BM_NllYeoJohnson(benchmark::State& state) {
  Gen g(12);
  const Dataset d(g.mixed_with_zeros(static_cast<std::size_t>(state.range(0)), 50.0));
  for (auto _ : state) benchmark::DoNotOptimize(nll(d, TransformKind::YeoJohnson, 0.7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NllYeoJohnson)->RangeMultiplier(10)->Range(100, 100000);

void BM_FitLambda(benchmark::State& state) {
  const Dataset d = positive_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_lambda(d, TransformKind::BoxCox));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitLambda)->RangeMultiplier(10)->Range(100, 10000)->Unit(benchmark::kMicrosecond);

void BM_FitAdversarialTable(benchmark::State& state) {
  const auto table = adversarial_table();
  const FitOptions opts = adversarial_fit_options();
  for (auto _ : state) {
    for (const AdversarialCase& c : table) {
      benchmark::DoNotOptimize(fit_lambda(Dataset(c.data), c.transform, opts));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(table.size()));
}
BENCHMARK(BM_FitAdversarialTable)->Unit(benchmark::kMicrosecond);

}  // namespace
