#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "hs/baiocchi.hpp"
#include "hs/fbdiag.hpp"
#include "hs/stefan.hpp"

using namespace hs;

static void BM_StefanStep(benchmark::State& state) {
  const Domain d = prepare(radial_scenario(1.0 / state.range(0), 0.25));
  const double m = 256.0, dt = 0.25 * d.grid.h() / d.max_p;
  stefan::State s = stefan::initial_state(d);
  for (int i = 0; i < 20; ++i) stefan::step(d, s, dt, m);
  for (auto _ : state) benchmark::DoNotOptimize(stefan::step(d, s, dt, m));
  state.counters["cells"] = static_cast<double>(d.fluid_cells.size());
}
BENCHMARK(BM_StefanStep)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_ObstacleSlice(benchmark::State& state) {
  const Domain d = prepare(radial_scenario(1.0 / state.range(0), 0.25));
  for (auto _ : state) benchmark::DoNotOptimize(baiocchi::solve_slice(d, 0.25));
  state.counters["cells"] = static_cast<double>(d.fluid_cells.size());
}
BENCHMARK(BM_ObstacleSlice)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_MinDiameter(benchmark::State& state) {
  std::vector<Point> pts;
  const int n = static_cast<int>(state.range(0));
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    pts.push_back({2.0 * std::cos(a), std::sin(a), 0.0});
  }
  for (auto _ : state) benchmark::DoNotOptimize(fbdiag::min_diameter(pts, 2));
}
BENCHMARK(BM_MinDiameter)->Arg(256)->Arg(4096);
BENCHMARK_MAIN();
