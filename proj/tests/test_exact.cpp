#include <cmath>
#include <random>

#include "doctest.h"
#include "ldot/ldot.hpp"
#include "oracles/oracles.hpp"

using namespace ldot;

namespace {

Matrix two_by_two(double c12, double c21) {
  Matrix c(2, 2);
  c << 0, c12, c21, 0;
  return c;
}

DiscreteMeasure uniform_points(std::vector<double> x) { return uniform_measure_1d(x); }

}  // namespace

TEST_CASE("1-D quadratic with sorted uniform atoms gives the identity assignment") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 2; n <= 6; ++n)
    for (int t = 0; t < 10; ++t) {
      std::vector<double> x, y;
      for (int k = 0; k < n; ++k) {
        x.push_back(u(rng));
        y.push_back(u(rng));
      }
      auto mu = uniform_points(x), nu = uniform_points(y);
      Matrix c = cost_matrix(CostSpec::quadratic(), mu, nu);
      auto pi = solve_exact(mu, nu, c);
      auto [best, perm] = oracle::best_assignment(c);
      CHECK(transport_cost(pi, c) == doctest::Approx(best / n).epsilon(1e-12));
      for (int i = 0; i < n; ++i) {
        CHECK(perm[static_cast<std::size_t>(i)] == static_cast<std::size_t>(i));
        CHECK(pi.mass(i, i) == doctest::Approx(1.0 / n));
      }
    }
}

TEST_CASE("2x2 example optimum is the diagonal") {
  auto h = uniform_points({1, 2});
  auto pi = solve_exact(h, h, two_by_two(1, 2));
  CHECK(pi.mass(0, 0) == 0.5);
  CHECK(pi.mass(1, 1) == 0.5);
  CHECK(pi.mass(0, 1) == 0.0);
  CHECK(pi.mass(1, 0) == 0.0);
}

TEST_CASE("constant cost returns some feasible coupling at that cost") {
  auto mu = build_measure_1d(std::vector<double>{0, 1, 2}, std::vector<double>{1, 2, 3});
  auto nu = build_measure_1d(std::vector<double>{0, 1}, std::vector<double>{1, 1});
  Matrix c = Matrix::Constant(3, 2, 2.5);
  auto pi = solve_exact(mu, nu, c);
  CHECK(transport_cost(pi, c) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(pi.marginal_residual() < 1e-15);
}

TEST_CASE("solve_exact matches the vertex oracle on random instances") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> size(1, 6);
    const int n = size(rng), m = size(rng);
    auto s = make_scenario(ScenarioKind::random_monotone,
                           {{"n", std::to_string(n)}, {"m", std::to_string(m)}, {"integer_weights", "1"}}, seed);
    // Alternate between quadratic costs and unstructured random tables.
    Matrix c = s.cost_table();
    if (seed % 2 == 1) {
      std::uniform_int_distribution<int> cell(0, 9);
      for (Eigen::Index i = 0; i < c.rows(); ++i)
        for (Eigen::Index j = 0; j < c.cols(); ++j) c(i, j) = cell(rng) / 4.0;
    }
    auto pi = solve_exact(s.mu, s.nu, c);
    auto orc = brute_force_oracle(s.mu, s.nu, c);
    CHECK(std::abs(transport_cost(pi, c) - orc.value) <= 1e-12 * std::max(1.0, std::abs(orc.value)));
    REQUIRE_FALSE(orc.optimal_vertices.empty());
    bool is_vertex = false;
    for (const auto& v : orc.optimal_vertices) is_vertex = is_vertex || (v - pi.mass()).cwiseAbs().maxCoeff() < 1e-12;
    CHECK(is_vertex);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("vertex oracle examples and limits") {
  auto u3 = uniform_points({0, 1, 2});
  auto r = brute_force_oracle(u3, u3, cost_matrix(CostSpec::quadratic(), u3, u3));
  CHECK(r.value == 0.0);
  REQUIRE(r.optimal_vertices.size() == 1);
  CHECK((r.optimal_vertices[0] - Matrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() < 1e-15);

  auto h = uniform_points({1, 2});
  CHECK(brute_force_oracle(h, h, two_by_two(1, 2)).value == 0.0);

  // Constant cost: every vertex is optimal; the 2x2 polytope has two.
  CHECK(brute_force_oracle(h, h, Matrix::Constant(2, 2, 1.0)).optimal_vertices.size() == 2);

  auto u7 = uniform_points({0, 1, 2, 3, 4, 5, 6});
  CHECK_THROWS_AS(brute_force_oracle(u7, u7, Matrix::Zero(7, 7)), BudgetExceeded);

  auto irr = build_measure_1d(std::vector<double>{0, 1}, std::vector<double>{1, std::sqrt(2.0)});
  CHECK_THROWS_AS(brute_force_oracle(irr, h, Matrix::Zero(2, 2)), InvalidArgument);
}

TEST_CASE("monotonicity_check examples") {
  auto h = uniform_points({0, 1});
  Matrix c = cost_matrix(CostSpec::quadratic(), h, h);
  auto star = extract_support(solve_exact(h, h, c));
  CHECK(monotonicity_check(star, c, 2).empty());

  auto bad = monotonicity_check(SupportSet({{0, 1}, {1, 0}}), c, 2);
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].gain == doctest::Approx(2.0));
  CHECK(bad[0].cycle.size() == 2);

  CHECK(monotonicity_check(SupportSet({{0, 0}}), c, 5).empty());
  CHECK_THROWS_AS(monotonicity_check(star, c, 1), InvalidArgument);
}

TEST_CASE("exact optima pass the monotonicity check") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto s = make_scenario(ScenarioKind::random_monotone, {{"n", "6"}, {"m", "5"}}, seed);
    Matrix c = s.cost_table();
    auto g = extract_support(solve_exact(s.mu, s.nu, c));
    CHECK(monotonicity_check(g, c, std::min<int>(static_cast<int>(g.size()), 6)).empty());
    REQUIRE(g.size() <= 12);
  }
}

TEST_CASE("randomized monotonicity mode on large supports") {
  auto s = make_scenario(ScenarioKind::notwist, {{"n", "40"}});
  Matrix c = cost_matrix(CostSpec::quadratic(), s.mu, s.nu);
  std::vector<IndexPair> diag;
  for (std::size_t i = 0; i < 40; ++i) diag.emplace_back(i, i);
  MonotonicityOptions o;
  o.n_random = 20000;
  CHECK(monotonicity_check(SupportSet(diag), c, 6, o).empty());
  // Reverse the assignment: many 2-cycles now improve the cost.
  std::vector<IndexPair> anti;
  for (std::size_t i = 0; i < 40; ++i) anti.emplace_back(i, 39 - i);
  CHECK_FALSE(monotonicity_check(SupportSet(anti), c, 6, o).empty());
  // Deterministic given the seed.
  CHECK(monotonicity_check(SupportSet(anti), c, 6, o).size() == monotonicity_check(SupportSet(anti), c, 6, o).size());
}

TEST_CASE("graph map of 1-D quadratic optima is nondecreasing") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto s = make_scenario(ScenarioKind::random_monotone, {{"n", "8"}, {"m", "8"}}, seed);
    auto g = extract_support(solve_exact(s.mu, s.nu, s.cost));
    // Generic weights split atoms, so test monotonicity of the pair list instead of a map.
    for (std::size_t k = 1; k < g.size(); ++k) CHECK(g.pairs()[k].second >= g.pairs()[k - 1].second);
    if (g.graph_map())
      for (std::size_t k = 1; k < g.graph_map()->size(); ++k) CHECK((*g.graph_map())[k] >= (*g.graph_map())[k - 1]);
  }
  auto u = uniform_points({0, 0.3, 0.5, 0.9});
  auto v = uniform_points({0.1, 0.2, 0.6, 1.5});
  auto g = extract_support(solve_exact(u, v, CostSpec::quadratic()));
  REQUIRE(g.graph_map().has_value());
  CHECK(*g.graph_map() == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("Rockafellar potential of the identity support is zero") {
  auto u = uniform_points({0, 0.25, 0.5, 0.75, 1.0});
  Matrix c = cost_matrix(CostSpec::quadratic(), u, u);
  std::vector<IndexPair> diag;
  for (std::size_t i = 0; i < 5; ++i) diag.emplace_back(i, i);
  SupportSet g(diag);
  for (std::size_t base = 0; base < 5; ++base) {
    auto pot = rockafellar_potential(g, c, {base, base});
    // Chains of distinct pairs, at most 4 steps, enumerated by brute force.
    auto chains = oracle::chain_potential(diag, c, base, 4, 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(pot.psi[i] == doctest::Approx(chains[i]).epsilon(1e-14));
    CHECK(pot.psi_at(base) == 0.0);
    CHECK(pot.psi_c_at(base) == doctest::Approx(0.0));
  }
  CHECK_THROWS_AS(rockafellar_potential(g, c, {0, 1}), InvalidArgument);
  CHECK_THROWS_AS(rockafellar_potential(g, c, {0, 0}).psi_at(7), DomainError);
}

TEST_CASE("Rockafellar potentials agree with chain enumeration and satisfy the potential identities") {
  int tested = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto s = make_scenario(ScenarioKind::random_monotone, {{"n", "3"}, {"m", "3"}}, seed);
    Matrix c = s.cost_table();
    auto g = extract_support(solve_exact(s.mu, s.nu, c));
    if (!monotonicity_check(g, c, static_cast<int>(g.size())).empty()) continue;
    ++tested;
    for (std::size_t b = 0; b < g.size(); ++b) {
      auto pot = rockafellar_potential(g, c, g.pairs()[b]);
      auto chains = oracle::chain_potential(g.pairs(), c, b, 4, s.mu.size());
      CHECK(pot.psi_at(g.pairs()[b].first) == 0.0);
      for (std::size_t i : g.x_proj()) CHECK(pot.psi_at(i) == doctest::Approx(chains[i]).epsilon(1e-12));
      for (const auto& [i, j] : g.pairs()) CHECK(std::abs(pot.psi_c_at(j) - pot.psi_at(i) - c(i, j)) <= 1e-9);
      for (std::size_t i : g.x_proj())
        for (std::size_t j : g.y_proj()) CHECK(pot.psi_c_at(j) - pot.psi_at(i) <= c(i, j) + 1e-9);
    }
  }
  CHECK(tested == 40);
}

TEST_CASE("Rockafellar potential rejects non-monotone supports") {
  auto h = uniform_points({0, 1});
  Matrix c = cost_matrix(CostSpec::quadratic(), h, h);
  CHECK_THROWS_AS(rockafellar_potential(SupportSet({{0, 1}, {1, 0}}), c, {0, 1}), PositiveCycleError);
}
