// Serial reference kernels against their OpenMP counterparts.
#include "spatopt/genotype.hpp"
#include "spatopt/raster.hpp"
#include "spatopt/rng.hpp"
#include "spatopt/workspace.hpp"

#include <benchmark/benchmark.h>

namespace {

spatopt::Genotype bench_genotype() {
  spatopt::Rng rng(7, 0x10000);
  return spatopt::random_genotype(spatopt::GridSpec{}, 100, spatopt::TypeProbabilities{}, rng);
}

void BM_RasterizeSerial(benchmark::State& state) {
  const auto g = bench_genotype();
  const spatopt::Grid grid(g.grid);
  for (auto _ : state) benchmark::DoNotOptimize(spatopt::rasterize_serial(g, grid));
}

void BM_RasterizeParallel(benchmark::State& state) {
  const auto g = bench_genotype();
  const spatopt::Grid grid(g.grid);
  for (auto _ : state) benchmark::DoNotOptimize(spatopt::rasterize(g, grid));
}

void BM_WorkspaceSerial(benchmark::State& state) {
  const auto section = spatopt::genotype_section(bench_genotype());
  for (auto _ : state) benchmark::DoNotOptimize(spatopt::compute_workspace_serial(section, {}));
}

void BM_WorkspaceParallel(benchmark::State& state) {
  const auto section = spatopt::genotype_section(bench_genotype());
  for (auto _ : state) benchmark::DoNotOptimize(spatopt::compute_workspace(section, {}));
}

}  // namespace

BENCHMARK(BM_RasterizeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RasterizeParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WorkspaceSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WorkspaceParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
