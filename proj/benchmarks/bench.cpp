#include <benchmark/benchmark.h>

#include <vector>

#include "dcslab/bridge_densities.hpp"
#include "dcslab/brownian.hpp"
#include "dcslab/enumeration.hpp"
#include "dcslab/poisson_coupling.hpp"
#include "dcslab/rational_joining.hpp"
#include "dcslab/rng.hpp"
#include "dcslab/transport.hpp"

using namespace dcs;

namespace {

void BM_SamplePath(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(brownian::sample_path(depth, seed++));
  state.SetItemsProcessed(state.iterations() << depth);
}
BENCHMARK(BM_SamplePath)->Arg(10)->Arg(14);

void BM_SampleBridge(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(brownian::sample_bridge(1.0, 1.0, depth, seed++));
  state.SetItemsProcessed(state.iterations() << depth);
}
BENCHMARK(BM_SampleBridge)->Arg(10)->Arg(14);

void BM_GlobalArgmin(benchmark::State& state) {
  const auto path = brownian::sample_path(14, 1);
  for (auto _ : state) benchmark::DoNotOptimize(brownian::global_argmin(path));
}
BENCHMARK(BM_GlobalArgmin);

void BM_EnumerateMinimizers(benchmark::State& state) {
  const auto path = brownian::sample_path(14, 2);
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(enumeration::enumerate_minimizers(path, m));
}
BENCHMARK(BM_EnumerateMinimizers)->Arg(8)->Arg(32);

void BM_PhiEval(benchmark::State& state) {
  // warm the normalization cache, then time the density evaluation itself
  densities::phi(0.8, 1.2, 0.5, densities::PhiVariant::time_weighted);
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        densities::phi(0.8, 1.2, t, densities::PhiVariant::time_weighted));
    t += 0.001;
    if (t > 0.9) t = 0.1;
  }
}
BENCHMARK(BM_PhiEval);

void BM_PhiNormConst(benchmark::State& state) {
  double a = 0.5;
  for (auto _ : state) {
    // vary a so that every iteration misses the cache
    benchmark::DoNotOptimize(densities::phi_norm_const(
        a, 1.0, densities::PhiVariant::time_weighted));
    a += 1e-6;
  }
}
BENCHMARK(BM_PhiNormConst);

void BM_CouplingRun(benchmark::State& state) {
  const auto oracle = coupling::uniform_oracle();
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(coupling::run_coupling(oracle, 30.0, 10, seed++));
}
BENCHMARK(BM_CouplingRun);

void BM_MaxMass(benchmark::State& state) {
  const int ground = static_cast<int>(state.range(0));
  transport::FiniteMeasure mu, nu;
  transport::BlockSet w;
  w.ground = ground;
  rng::Stream s(7);
  for (int i = 0; i < ground; ++i) {
    mu.weights.emplace_back(static_cast<long long>(s.uniform() * 7), 12);
    nu.weights.emplace_back(static_cast<long long>(s.uniform() * 7), 12);
  }
  for (int b = 0; b < 4; ++b) {
    std::vector<int> u, v;
    for (int i = 0; i < ground; ++i) {
      if (s.uniform() < 0.4) u.push_back(i);
      if (s.uniform() < 0.4) v.push_back(i);
    }
    if (!u.empty() && !v.empty()) w.blocks.push_back({u, v});
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(transport::max_mass(mu, nu, w));
}
BENCHMARK(BM_MaxMass)->Arg(4)->Arg(8);

void BM_GreedyJoin(benchmark::State& state) {
  const long long L = state.range(0);
  const auto f = joining::uniform_grid(0, L, L);
  const auto g = joining::truncated_exponential_grid(5 * L, L);
  std::vector<long long> shifts;
  for (long long q = -(L - 1); q <= 5 * L - 1; ++q) shifts.push_back(q);
  for (auto _ : state)
    benchmark::DoNotOptimize(joining::greedy_join(f, g, shifts, 50));
}
BENCHMARK(BM_GreedyJoin)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
