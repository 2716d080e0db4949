#include <benchmark/benchmark.h>

#include <vector>

#include "generators.hpp"
#include "stablepower/aggregate.hpp"

namespace {

using namespace stablepower;
using stablepower::testing::Gen;

std::vector<double> samples(std::size_t n) {
  Gen g(21);
  return g.normal_vector(n, 1e4, 1e-3);
}

void BM_AggregateQueueSingletons(benchmark::State& state) {
  const std::vector<double> xs = samples(static_cast<std::size_t>(state.range(0)));
  std::vector<Aggregate> parts;
  for (double x : xs) parts.push_back(from_values(std::vector<double>{x}));
  for (auto _ : state) benchmark::DoNotOptimize(aggregate_queue(parts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AggregateQueueSingletons)->RangeMultiplier(10)->Range(100, 100000);

void BM_FromValues(benchmark::State& state) {
  const std::vector<double> xs = samples(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(from_values(xs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FromValues)->RangeMultiplier(10)->Range(100, 100000);

void BM_VarianceNaive(benchmark::State& state) {
  const std::vector<double> xs = samples(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(variance_naive_onepass(xs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VarianceNaive)->RangeMultiplier(10)->Range(100, 100000);

}  // namespace
