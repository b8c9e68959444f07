#include <benchmark/benchmark.h>

#include "ldot/ldot.hpp"

using namespace ldot;

namespace {

struct Fixture {
  Matrix c;
  SupportSet g;
};

Fixture notwist(long n) {
  auto s = make_scenario(ScenarioKind::notwist, {{"n", std::to_string(n)}});
  Matrix c = s.cost_table();
  return {c, extract_support(solve_exact(s.mu, s.nu, c))};
}

}  // namespace

static void BM_RateFieldExact(benchmark::State& state) {
  const auto f = notwist(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rate_field(f.g, f.c, RateMethod::primal_exact).values.sum());
}
BENCHMARK(BM_RateFieldExact)->Arg(21)->Arg(51)->Arg(101)->Unit(benchmark::kMillisecond);

static void BM_RateFieldDual(benchmark::State& state) {
  const auto s = make_scenario(ScenarioKind::gaussian1d, {{"n", std::to_string(state.range(0))}});
  const Matrix c = s.cost_table();
  const auto g = extract_support(solve_exact(s.mu, s.nu, c));
  for (auto _ : state) benchmark::DoNotOptimize(rate_field(g, c, RateMethod::dual).values.sum());
}
BENCHMARK(BM_RateFieldDual)->Arg(61)->Arg(201)->Unit(benchmark::kMillisecond);

static void BM_BruteForcePoint(benchmark::State& state) {
  const auto f = notwist(11);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rate_primal_bruteforce(f.g, f.c, {2, 6}, k));
}
BENCHMARK(BM_BruteForcePoint)->DenseRange(2, 4)->Unit(benchmark::kMicrosecond);
