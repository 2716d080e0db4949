#include <benchmark/benchmark.h>

#include <vector>

#include "generators.hpp"
#include "stablepower/lambert_w.hpp"
#include "stablepower/transforms.hpp"

namespace {

using stablepower::testing::Gen;

std::vector<double> inputs(std::size_t n, double lo, double hi, std::uint64_t seed) {
  Gen g(seed);
  return g.log_uniform_vector(n, lo, hi);
}

void BM_BoxCox(benchmark::State& state) {
  const std::vector<double> xs = inputs(1024, 1e-2, 1e2, 1);
  for (auto _ : state) {
    double acc = 0.0;
    for (double x : xs) acc += stablepower::boxcox(1.7, x);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(xs.size()));
}
BENCHMARK(BM_BoxCox);

void BM_YeoJohnson(benchmark::State& state) {
  Gen g(2);
  const std::vector<double> xs = g.mixed_with_zeros(1024, 50.0);
  for (auto _ : state) {
    double acc = 0.0;
    for (double x : xs) acc += stablepower::yeojohnson(0.6, x);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(xs.size()));
}
BENCHMARK(BM_YeoJohnson);

void BM_BoxCoxDeriv(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const std::vector<double> xs = inputs(1024, 0.2, 5.0, 3);
  for (auto _ : state) {
    double acc = 0.0;
    for (double x : xs) acc += stablepower::boxcox_deriv(k, 2.5, x);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(xs.size()));
}
BENCHMARK(BM_BoxCoxDeriv)->Arg(1)->Arg(2)->Arg(4);

void BM_LambertW(benchmark::State& state) {
  const int branch = static_cast<int>(state.range(0));
  Gen g(4);
  std::vector<double> zs;
  for (int i = 0; i < 1024; ++i) zs.push_back(-g.uniform(1e-6, 0.3678));
  for (auto _ : state) {
    double acc = 0.0;
    for (double z : zs) acc += stablepower::lambert_w(branch, z);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(zs.size()));
}
BENCHMARK(BM_LambertW)->Arg(0)->Arg(-1);

void BM_InverseBoxCox(benchmark::State& state) {
  const std::vector<double> xs = inputs(256, 1.1, 50.0, 5);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(stablepower::boxcox(-3.0, x));
  for (auto _ : state) {
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) acc += stablepower::inv_boxcox_lambda(xs[i], ys[i]);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(xs.size()));
}
BENCHMARK(BM_InverseBoxCox);

}  // namespace
