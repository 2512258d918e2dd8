#include <benchmark/benchmark.h>

#include <numeric>

#include "msfa/demosaic_classic.hpp"
#include "msfa/forward_model.hpp"
#include "msfa/pattern.hpp"
#include "msfa/synth.hpp"
#include "msfa/vtv.hpp"
#include "msfa/wiener.hpp"

namespace {

using namespace msfa;

struct Fixture {
  SpectralGrid grid{420, 10, 16};
  FilterArrayPattern pattern;
  SensitivityMatrix sens;
  MultispectralImage cube;
  MosaickedImage mosaic;

  explicit Fixture(int side) : sens(16, grid) {
    pattern.tile_height = pattern.tile_width = 4;
    pattern.num_filters = 16;
    pattern.cells.resize(16);
    std::iota(pattern.cells.begin(), pattern.cells.end(), 0);
    for (int k = 0; k < 16; ++k) sens.at(k, k) = 1.0;
    cube = synth_cube(side, side, grid, 4, 2.0, 1);
    mosaic = mosaic_apply(cube, pattern, sens);
  }
};

void BM_MosaicApply(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(mosaic_apply(f.cube, f.pattern, f.sens));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_MosaicApply)->Arg(64)->Arg(128)->Arg(256);

void BM_DemosaicBilinear(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  const auto sampling = band_sampling_identity(f.pattern, 16);
  for (auto _ : state)
    benchmark::DoNotOptimize(demosaic_bilinear(f.mosaic, sampling, f.grid));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_DemosaicBilinear)->Arg(64)->Arg(128);

void BM_VtvIterations(benchmark::State& state) {
  const Fixture f(64);
  VtvConfig cfg;
  cfg.lambda = 0.05;
  cfg.max_iters = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(demosaic_vtv(f.mosaic, f.pattern, f.sens, cfg));
}
BENCHMARK(BM_VtvIterations)->Arg(10)->Arg(50);

void BM_WienerTrain(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  const std::vector<MultispectralImage> training{f.cube};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        wiener_train(training, f.pattern, f.sens, 0.0, 0, 1, 1e-6));
}
BENCHMARK(BM_WienerTrain)->Arg(32)->Arg(64);

void BM_Annd(benchmark::State& state) {
  FilterArrayPattern p;
  p.tile_height = p.tile_width = static_cast<int>(state.range(0));
  p.num_filters = p.tile_area();
  p.cells.resize(p.tile_area());
  std::iota(p.cells.begin(), p.cells.end(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(annd(p));
}
BENCHMARK(BM_Annd)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
