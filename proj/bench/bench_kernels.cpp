// Serial reference vs OpenMP kernels on the lattices the locus and distance code use.
#include <benchmark/benchmark.h>

#include "ars2d/fixtures.hpp"
#include "ars2d/kernels.hpp"

using namespace ars2d;

namespace {

const Structure& structure() {
  static const Structure s(fixture("tangency-torus"));
  return s;
}

void BM_SampleFrame(benchmark::State& state) {
  const Exec exec = state.range(0) ? Exec::Parallel : Exec::Serial;
  const Lattice lat = Lattice::over(structure().chart(), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(sample_frame(structure(), lat, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(lat.size()));
}

void BM_SampleDet(benchmark::State& state) {
  const Exec exec = state.range(0) ? Exec::Parallel : Exec::Serial;
  const Lattice lat = Lattice::over(structure().chart(), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(sample_scalar(structure().det(), lat, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(lat.size()));
}

void BM_StencilCosts(benchmark::State& state) {
  const Exec exec = state.range(0) ? Exec::Parallel : Exec::Serial;
  const Lattice lat = Lattice::over(structure().chart(), static_cast<int>(state.range(1)));
  const FrameSamples half = sample_frame(structure(), lat.refined(), Exec::Parallel);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stencil_costs(lat, half, stencil16(), structure().tol(), exec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(lat.size()));
}

}  // namespace

BENCHMARK(BM_SampleFrame)->ArgsProduct({{0, 1}, {256, 512}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleDet)->ArgsProduct({{0, 1}, {256, 512}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StencilCosts)->ArgsProduct({{0, 1}, {256, 512}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
