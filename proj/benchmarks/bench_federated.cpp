#include <benchmark/benchmark.h>

#include <vector>

#include "generators.hpp"
#include "stablepower/federated.hpp"

namespace {

using namespace stablepower;
using stablepower::testing::Gen;

std::vector<ClientShard> shards(std::size_t n, std::size_t k) {
  Gen g(31);
  const std::vector<double> xs = g.normal_vector(n, 100.0, 15.0);
  return make_shards(xs, k, 7);
}

void BM_ClientMessageBoxCox(benchmark::State& state) {
  const std::vector<ClientShard> s = shards(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(client_message_bc(s.front(), 1.3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ClientMessageBoxCox)->RangeMultiplier(10)->Range(100, 100000);

void BM_FedFit(benchmark::State& state, Protocol protocol) {
  const std::vector<ClientShard> s = shards(10000, static_cast<std::size_t>(state.range(0)));
  FedRun run;
  run.protocol = protocol;
  for (auto _ : state) benchmark::DoNotOptimize(fed_fit(s, TransformKind::BoxCox, {}, run));
}
BENCHMARK_CAPTURE(BM_FedFit, brent, Protocol::brent())
    ->Arg(1)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_FedFit, grid_64, Protocol::grid(64))
    ->Arg(1)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_WireRoundTrip(benchmark::State& state) {
  const std::vector<ClientShard> s = shards(100, 1);
  WireRecord record{3, 1.3, "client-000", TransformKind::BoxCox, client_message_bc(s.front(), 1.3)};
  for (auto _ : state) benchmark::DoNotOptimize(decode_record(encode_record(record)));
}
BENCHMARK(BM_WireRoundTrip);

}  // namespace
