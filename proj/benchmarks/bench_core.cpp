#include <benchmark/benchmark.h>

#include "xyqcr/lattice_model.hpp"
#include "xyqcr/mode_dynamics.hpp"
#include "xyqcr/observables.hpp"

using namespace xyqcr;

static void BM_Dispersion(benchmark::State& state) {
  double phi = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dispersion(phi, 0.5, 0.8));
    phi += 1e-6;
  }
}
BENCHMARK(BM_Dispersion);

static void BM_MakeGrid(benchmark::State& state) {
  for (auto _ : state) {
    MomentumGrid g = make_grid(static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(g.nodes.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MakeGrid)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

static void BM_PrepareQuench(benchmark::State& state) {
  const MomentumGrid& grid = pooled_grid(static_cast<int>(state.range(0)));
  const QuenchProtocol q{0.5, 1.0, std::nullopt};
  for (auto _ : state) {
    PreparedQuench pq(q, 0.8, Temperature::of(0.05), grid);
    benchmark::DoNotOptimize(&pq);
  }
}
BENCHMARK(BM_PrepareQuench)->Arg(2048);

static void BM_TwoSiteScan(benchmark::State& state) {
  const MomentumGrid& grid = pooled_grid(2048);
  const QuenchProtocol q{0.5, 1.0, std::nullopt};
  const PreparedQuench pq(q, 0.8, Temperature::of(0.05), grid);
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto states = pq.scan(0.0, 0.005, count);
    benchmark::DoNotOptimize(states.data());
  }
  state.SetItemsProcessed(state.iterations() * count);
}
BENCHMARK(BM_TwoSiteScan)->Arg(4001);

static void BM_PulseScan(benchmark::State& state) {
  const MomentumGrid& grid = pooled_grid(2048);
  const PreparedPulse pulse({0.5, 1.0, 0.0}, 0.8, Temperature::of(0.05), grid);
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto vals = pulse.scan(0.0, 0.005, count);
    benchmark::DoNotOptimize(vals.data());
  }
  state.SetItemsProcessed(state.iterations() * count);
}
BENCHMARK(BM_PulseScan)->Arg(4001);

static void BM_Negativity(benchmark::State& state) {
  const TwoSiteState s{0.2, 0.3, -0.25, 0.1, 0.05};
  for (auto _ : state) benchmark::DoNotOptimize(negativity(s));
}
BENCHMARK(BM_Negativity);

static void BM_MutualInformation(benchmark::State& state) {
  const TwoSiteState s{0.2, 0.3, -0.25, 0.1, 0.05};
  for (auto _ : state) benchmark::DoNotOptimize(mutual_information(s));
}
BENCHMARK(BM_MutualInformation);

BENCHMARK_MAIN();
