#include <benchmark/benchmark.h>

#include "ldot/ldot.hpp"

using namespace ldot;

static void BM_SinkhornGaussian(benchmark::State& state) {
  const auto s = make_scenario(ScenarioKind::gaussian1d, {{"n", std::to_string(state.range(0))}});
  const Matrix c = s.cost_table();
  for (auto _ : state) {
    auto sol = solve_entropic(s.mu, s.nu, c, 0.1);
    benchmark::DoNotOptimize(sol.marginal_residual);
    state.counters["iterations"] = sol.iterations;
  }
}
BENCHMARK(BM_SinkhornGaussian)->Arg(51)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

// Warm-started ladder on the 2x2 instance down to eps ~ 0.035.
static void BM_Ladder2x2(benchmark::State& state) {
  const auto s = make_scenario(ScenarioKind::assignment2x2);
  const Matrix c = s.cost_table();
  const auto ladder = geometric_ladder(0.4);
  for (auto _ : state) {
    auto sw = epsilon_sweep(s.mu, s.nu, c, ladder, {{{0, 1}}});
    benchmark::DoNotOptimize(sw.extrapolated_rate);
  }
}
BENCHMARK(BM_Ladder2x2)->Unit(benchmark::kMicrosecond);
