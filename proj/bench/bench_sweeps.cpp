#include <benchmark/benchmark.h>

#include "shearstab/resolvent.hpp"
#include "shearstab/sweep.hpp"

using namespace shearstab;

namespace {

void os_sweep(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const auto profile = make_profile("poiseuille");
  const auto grid = build_grid(64, {});
  const std::vector<double> alphas{0.8, 0.9, 1.0, 1.1, 0.8, 0.9, 1.0, 1.1};
  const std::vector<double> Res{5000, 5000, 5000, 5000, 8000, 8000, 8000, 8000};
  for (auto _ : state) benchmark::DoNotOptimize(os_growth_sweep(profile, alphas, Res, grid, parallel));
}

void heat_grid(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  std::vector<double> ts, dxs;
  for (int i = 0; i < 8; ++i) {
    ts.push_back(0.1 + 0.25 * i);
    dxs.push_back(0.25 * i);
  }
  for (auto _ : state) benchmark::DoNotOptimize(heat_green_grid(ts, dxs, 1.0, parallel));
}

}  // namespace

BENCHMARK(os_sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(heat_grid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
