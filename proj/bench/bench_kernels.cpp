// Serial reference vs OpenMP kernels. Arg is the problem size.

#include <benchmark/benchmark.h>

#include <numeric>

#include "dualsim/experiments.hpp"
#include "dualsim/kernels.hpp"

using namespace dualsim;

namespace {

const SlitGeometry kGeometry;

ScreenSampler sampler(std::size_t bins) {
  const auto grid = default_screen(kGeometry, bins);
  const auto p = double_slit_pattern(kGeometry, false, grid);
  return {InverseCdf(p.intensities), grid.lo, grid.width()};
}

template <auto Sample>
void sample(benchmark::State& state) {
  const auto s = sampler(1024);
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Sample(s, n, 42));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Accumulate>
void accumulate(benchmark::State& state) {
  const auto grid = default_screen(kGeometry, 1024);
  const auto events = serial::sample_events(sampler(1024), static_cast<std::uint64_t>(state.range(0)), 7);
  std::vector<double> edges(grid.bins + 1);
  for (std::size_t i = 0; i <= grid.bins; ++i) edges[i] = grid.lo + static_cast<double>(i) * grid.width();
  for (auto _ : state) benchmark::DoNotOptimize(Accumulate(events, edges));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Intensities>
void intensities(benchmark::State& state) {
  const auto xs = default_screen(kGeometry, static_cast<std::size_t>(state.range(0))).centers();
  const PathCoherence rho{0.5, 0.5, Amplitude(0.5, 0.0)};
  for (auto _ : state) benchmark::DoNotOptimize(Intensities(rho, kGeometry, xs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(sample<serial::sample_events>)->Name("sample_events/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(sample<omp::sample_events>)->Name("sample_events/omp")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(accumulate<serial::accumulate>)->Name("accumulate/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(accumulate<omp::accumulate>)->Name("accumulate/omp")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(intensities<serial::screen_intensities>)->Name("screen_intensities/serial")->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(intensities<omp::screen_intensities>)->Name("screen_intensities/omp")->Arg(1 << 12)->Arg(1 << 16);

BENCHMARK_MAIN();
