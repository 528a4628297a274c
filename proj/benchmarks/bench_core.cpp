#include <benchmark/benchmark.h>

#include "cctskit/netdesign.hpp"
#include "cctskit/reservoir.hpp"
#include "cctskit/routing.hpp"
#include "fixtures.hpp"

using namespace cctskit;

static void BM_LeastCostPath(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = testfx::random_surface(n, n, 7);
  for (auto _ : state) benchmark::DoNotOptimize(routing::least_cost_path(g, {0, 0}, {n - 1, n - 1}).routed_cost);
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n * n));
}
BENCHMARK(BM_LeastCostPath)->RangeMultiplier(2)->Range(32, 512)->Complexity();

static void BM_SolveShared(benchmark::State& state) {
  const auto p = testfx::random_instance(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(netdesign::solve_shared(p).report.objective);
}
BENCHMARK(BM_SolveShared)->DenseRange(1, 4);

static void BM_SampleParameters(benchmark::State& state) {
  reservoir::FormationParams f;
  f.name = "Frio";
  f.depth = 2400;
  f.thickness = 150;
  f.permeability = 500 * reservoir::kMillidarcy;
  f.porosity = 0.28;
  f.depth_min = 1200;
  f.depth_max = 3600;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reservoir::sample_parameters(f, n, 42).size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleParameters)->Arg(1000)->Arg(10000);
BENCHMARK_MAIN();
