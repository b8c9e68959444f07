#include <benchmark/benchmark.h>

#include "ldot/ldot.hpp"

using namespace ldot;

static void BM_TransportSimplex(benchmark::State& state) {
  const long n = state.range(0);
  const auto s = make_scenario(ScenarioKind::random_monotone, {{"n", std::to_string(n)}}, 1);
  const Matrix c = s.cost_table();
  for (auto _ : state) {
    auto pi = solve_exact(s.mu, s.nu, c);
    benchmark::DoNotOptimize(pi.mass().data());
  }
}
BENCHMARK(BM_TransportSimplex)->Arg(10)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_Monotonicity(benchmark::State& state) {
  const auto s = make_scenario(ScenarioKind::gaussian1d, {{"n", "101"}});
  const Matrix c = s.cost_table();
  const auto g = extract_support(solve_exact(s.mu, s.nu, c));
  MonotonicityOptions o;
  o.n_random = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(monotonicity_check(g, c, 4, o).size());
}
BENCHMARK(BM_Monotonicity)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
