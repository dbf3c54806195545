#include <benchmark/benchmark.h>

#include "wgqed/analysis.hpp"
#include "wgqed/coupling.hpp"
#include "wgqed/dynamics.hpp"
#include "wgqed/fourier.hpp"
#include "wgqed/spectra.hpp"

namespace {

using namespace wgqed;

Scenario chain(std::size_t n, bool pulse) {
  Scenario s{make_chain({n, 0.13, 1.0, 0.1, 0.2, 2.0, kPi / 2, 1e-6})};
  if (pulse)
    s.input = GaussianPulse{10.0, 0.0};
  else
    s.initial_excitation = {1.0};
  return s;
}

void BM_BuildCouplings(benchmark::State& state) {
  const auto s = chain(static_cast<std::size_t>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(build_couplings(s));
}
BENCHMARK(BM_BuildCouplings)->RangeMultiplier(4)->Range(2, 64);

void BM_CollectiveModes(benchmark::State& state) {
  const auto c = build_couplings(chain(static_cast<std::size_t>(state.range(0)), true));
  for (auto _ : state) benchmark::DoNotOptimize(collective_modes(c));
}
BENCHMARK(BM_CollectiveModes)->RangeMultiplier(4)->Range(2, 64);

void BM_ScatteringSpectra(benchmark::State& state) {
  const auto s = chain(static_cast<std::size_t>(state.range(0)), true);
  const auto grid = uniform_grid(0.0, 20.0, 16001);
  SpectraOptions opts;
  opts.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(scattering_spectra(s, grid, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_ScatteringSpectra)->Args({2, 1})->Args({2, 4})->Args({16, 1})->Args({16, 4})->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_DefaultGrid(benchmark::State& state) {
  const auto s = chain(static_cast<std::size_t>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(default_grid(s));
}
BENCHMARK(BM_DefaultGrid)->Arg(2)->Arg(16);

void BM_Evolve(benchmark::State& state) {
  const auto s = chain(static_cast<std::size_t>(state.range(0)), false);
  EvolveOptions opts;
  opts.t_max = 10.0;
  opts.output_stride = 10;
  for (auto _ : state) benchmark::DoNotOptimize(evolve(s, opts));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_Evolve)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_FourierChi(benchmark::State& state) {
  const auto s = chain(4, false);
  EvolveOptions opts;
  opts.t_max = 40.0;
  opts.output_stride = 4;
  const auto traj = evolve(s, opts);
  const auto grid = uniform_grid(0.0, 20.0, 2001);
  FourierOptions f;
  f.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fourier_chi(traj, s.array, grid, f));
}
BENCHMARK(BM_FourierChi)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_SpectrumDifference(benchmark::State& state) {
  const auto s = chain(2, true);
  const auto grid = canonical_difference_grid(s);
  for (auto _ : state) benchmark::DoNotOptimize(nw_spectrum_difference(s, grid, 4));
}
BENCHMARK(BM_SpectrumDifference)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
