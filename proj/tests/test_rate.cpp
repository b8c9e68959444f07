#include <cmath>
#include <random>

#include "doctest.h"
#include "ldot/ldot.hpp"

using namespace ldot;

namespace {

Scenario notwist(int n) { return make_scenario(ScenarioKind::notwist, {{"n", std::to_string(n)}}); }

Scenario two_by_two() { return make_scenario(ScenarioKind::assignment2x2, {}); }

SupportSet diagonal(std::size_t n) {
  std::vector<IndexPair> d;
  for (std::size_t i = 0; i < n; ++i) d.emplace_back(i, i);
  return SupportSet(d);
}

// Exact optimum of a random_monotone instance; generic weights give a staircase support.
struct Instance {
  Scenario s;
  Matrix c;
  SupportSet g;
};

Instance random_instance(std::uint64_t seed, int n, int m) {
  auto s = make_scenario(ScenarioKind::random_monotone, {{"n", std::to_string(n)}, {"m", std::to_string(m)}}, seed);
  Matrix c = s.cost_table();
  auto g = extract_support(solve_exact(s.mu, s.nu, c));
  return {std::move(s), std::move(c), std::move(g)};
}

}  // namespace

TEST_CASE("rate vanishes on the support for every method") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto in = random_instance(seed, 4, 3);
    auto pot = rockafellar_potential(in.g, in.c, in.g.pairs()[0]);
    for (const auto& p : in.g.pairs()) {
      CHECK(rate_primal_exact(in.g, in.c, p) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
      CHECK(rate_primal_bruteforce(in.g, in.c, p, static_cast<int>(std::min<std::size_t>(in.g.size() + 1, 6))) ==
            doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
      CHECK(std::abs(rate_dual(pot, in.c, p)) < 1e-12);
    }
  }
}

TEST_CASE("2x2 instance has a vanishing rate everywhere") {
  auto s = two_by_two();
  Matrix c = s.cost_table();
  const SupportSet& g = *s.facts.gamma;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(std::abs(rate_primal_exact(g, c, {i, j})) <= 1e-10);
      CHECK(rate_primal_bruteforce(g, c, {i, j}, 2) == 0.0);
    }
}

TEST_CASE("no-twist brute force on a grid") {
  auto s = notwist(11);
  Matrix c = s.cost_table();
  auto g = diagonal(11);
  // Discrete supremum: (y-x)^2 less the smallest sum of squared grid steps.
  CHECK(rate_primal_bruteforce(g, c, {2, 6}, 2) == doctest::Approx(0.08).epsilon(1e-12));
  CHECK(rate_primal_bruteforce(g, c, {2, 6}, 3) == doctest::Approx(0.10).epsilon(1e-12));
  CHECK(rate_primal_bruteforce(g, c, {2, 6}, 5) == doctest::Approx(0.12).epsilon(1e-12));
  CHECK(rate_primal_bruteforce(g, c, {2, 6}, 6) == doctest::Approx(0.12).epsilon(1e-12));
  CHECK(rate_primal_exact(g, c, {2, 6}) == doctest::Approx(0.12).epsilon(1e-12));
  CHECK(rate_primal_bruteforce(g, c, {7, 2}, 4) == 0.0);
  CHECK(rate_primal_exact(g, c, {7, 2}) == 0.0);
}

TEST_CASE("brute force is nondecreasing in k_max") {
  auto in = random_instance(3, 5, 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      double prev = -1.0;
      for (int k = 2; k <= 6; ++k) {
        const double v = rate_primal_bruteforce(in.g, in.c, {i, j}, k);
        CHECK(v >= prev);
        prev = v;
      }
    }
}

TEST_CASE("quadratic identity transport") {
  std::vector<double> x;
  for (int k = 0; k <= 10; ++k) x.push_back(k / 10.0);
  auto mu = uniform_measure_1d(x);
  Matrix c = cost_matrix(CostSpec::quadratic(), mu, mu);
  auto g = diagonal(11);
  // Grid chains give (y-x)^2 - h|y-x|; the continuum value 0.16 needs arbitrarily fine steps.
  CHECK(rate_primal_exact(g, c, {2, 6}) == doctest::Approx(0.12).epsilon(1e-12));
  CHECK(rate_primal_bruteforce(g, c, {2, 6}, 2) == doctest::Approx(0.08).epsilon(1e-12));
  CHECK(rate_primal_bruteforce(g, c, {2, 6}, 3) == doctest::Approx(0.10).epsilon(1e-12));
  CHECK(rate_primal_bruteforce(g, c, {2, 6}, 4) == doctest::Approx(0.12).epsilon(1e-12));

  KantorovichPotentials zero;
  zero.x_indices = g.x_proj();
  zero.y_indices = g.y_proj();
  zero.psi.assign(11, 0.0);
  zero.psi_c.assign(11, 0.0);
  zero.base_pair = {0, 0};
  CHECK(rate_dual(zero, c, {2, 6}) == doctest::Approx(0.16).epsilon(1e-12));
  CHECK(rate_dual(zero, c, {4, 4}) == 0.0);
  // The primal value never exceeds the dual value of a potential.
  auto field = rate_field(g, c, RateMethod::primal_exact);
  for (std::size_t i = 0; i < 11; ++i)
    for (std::size_t j = 0; j < 11; ++j) CHECK(field.at(i, j) <= rate_dual(zero, c, {i, j}) + 1e-12);
}

TEST_CASE("exact rate equals brute force on small supports") {
  int instances = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    auto in = random_instance(seed, 3 + static_cast<int>(seed % 3), 3);
    if (in.g.size() > 5) continue;
    ++instances;
    const int k = static_cast<int>(in.g.size()) + 1;
    for (std::size_t i : in.g.x_proj())
      for (std::size_t j = 0; j < in.s.nu.size(); ++j)
        CHECK(std::abs(rate_primal_exact(in.g, in.c, {i, j}) - rate_primal_bruteforce(in.g, in.c, {i, j}, k)) <= 1e-10);
  }
  CHECK(instances > 30);
}

TEST_CASE("dual rate equals exact rate when the probe passes") {
  int passed = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto in = random_instance(seed, 5, 4);
    if (in.g.size() < 3) continue;
    auto probe = independence_probe(in.g, in.c, 3);
    if (!probe.passed()) continue;
    ++passed;
    auto dual = rate_field(in.g, in.c, RateMethod::dual);
    auto exact = rate_field(in.g, in.c, RateMethod::primal_exact);
    CHECK((dual.values - exact.values).cwiseAbs().maxCoeff() <= 1e-8);
  }
  CHECK(passed > 20);
}

TEST_CASE("rate domain errors") {
  auto s = notwist(5);
  Matrix c = s.cost_table();
  SupportSet g({{1, 1}, {2, 2}});
  CHECK_THROWS_AS(rate_primal_exact(g, c, {0, 4}), DomainError);
  CHECK_NOTHROW(rate_primal_exact(g, c, {1, 4}));
  CHECK_NOTHROW(rate_primal_exact(g, c, {0, 2}));
  auto pot = rockafellar_potential(g, c, {1, 1});
  CHECK_THROWS_AS(rate_dual(pot, c, {0, 1}), DomainError);
  CHECK_THROWS_AS(rate_primal_bruteforce(g, c, {1, 2}, 1), InvalidArgument);
  CHECK_THROWS_AS(rate_primal_bruteforce(g, c, {1, 2}, 7), InvalidArgument);
  CHECK_THROWS_AS(rate_primal_exact(SupportSet({{0, 0}, {1, 1}}), Matrix{{1, 0}, {0, 1}}, {0, 1}), PositiveCycleError);
}

TEST_CASE("brute force refuses oversize enumerations") {
  auto s = notwist(60);
  Matrix c = s.cost_table();
  CHECK_THROWS_AS(rate_primal_bruteforce(diagonal(60), c, {2, 6}, 6), BudgetExceeded);
}

TEST_CASE("independence probe") {
  auto s = two_by_two();
  auto p = independence_probe(*s.facts.gamma, s.cost_table(), 2);
  CHECK(p.spread == doctest::Approx(3.0));
  CHECK_FALSE(p.passed());

  CHECK(independence_probe(SupportSet({{0, 0}}), s.cost_table(), 2).spread == 0.0);
  CHECK_THROWS_AS(independence_probe(*s.facts.gamma, s.cost_table(), 3), InvalidArgument);
  CHECK_THROWS_AS(independence_probe(*s.facts.gamma, s.cost_table(), 1), InvalidArgument);

  auto gauss = make_scenario(ScenarioKind::gaussian1d, {{"n", "61"}});
  Matrix c = gauss.cost_table();
  auto g = extract_support(solve_exact(gauss.mu, gauss.nu, c));
  auto stair = independence_probe(g, c, 5);
  CHECK(stair.base_pairs.size() == 5);
  CHECK(stair.spread <= 1e-9);

  // A perfect matching has one free gauge per pair.
  auto nt = notwist(21);
  CHECK(independence_probe(diagonal(21), nt.cost_table(), 4).spread > 1e-3);
}

TEST_CASE("cross_difference") {
  Matrix c{{0, 1}, {2, 0}};
  CHECK(cross_difference(c, 0, 0, 1, 1) == -3.0);
  CHECK(cross_difference(c, 0, 1, 1, 0) == 3.0);
  CHECK(cross_difference(c, 1, 0, 1, 1) == 0.0);
  std::vector<double> x{0}, x2{1}, y{0}, y2{1};
  CHECK(cross_difference(CostSpec::quadratic(), x, y, x2, y2) == doctest::Approx(-2.0));
  CHECK(cross_difference(CostSpec::quadratic(), x, y, x, y2) == 0.0);
}

TEST_CASE("sum identity with the cross difference") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto in = random_instance(seed, 6, 6);
    const bool probe = in.g.size() >= 3 && independence_probe(in.g, in.c, 3).passed();
    auto pot = rockafellar_potential(in.g, in.c, in.g.pairs()[0]);
    const auto& pairs = in.g.pairs();
    for (const auto& [xp, y] : pairs)
      for (const auto& [x, yp] : pairs) {
        const double cd = cross_difference(in.c, x, y, xp, yp);
        const double dual = rate_dual(pot, in.c, {x, y}) + rate_dual(pot, in.c, {xp, yp});
        CHECK(std::abs(dual - cd) <= 1e-10);
        const double primal = rate_primal_exact(in.g, in.c, {x, y}) + rate_primal_exact(in.g, in.c, {xp, yp});
        // The primal rate never exceeds the dual value of any potential.
        CHECK(primal <= cd + 1e-10);
        if (probe) {
          CHECK(std::abs(primal - cd) <= 1e-8);
          ++checked;
        }
      }
  }
  CHECK(checked > 100);
}

TEST_CASE("the lower inequality fails without connectedness") {
  auto s = two_by_two();
  Matrix c = s.cost_table();
  const SupportSet& g = *s.facts.gamma;
  // (x',y) = (1,1), (x,y') = (0,0): I(0,1) + I(1,0) = 0 < 3.
  const double lhs = rate_primal_exact(g, c, {0, 1}) + rate_primal_exact(g, c, {1, 0});
  CHECK(lhs == doctest::Approx(0.0));
  CHECK(cross_difference(c, 0, 1, 1, 0) == 3.0);
}

TEST_CASE("positivity scans") {
  std::vector<double> x;
  for (int k = 0; k <= 20; ++k) x.push_back(k / 20.0);
  auto mu = uniform_measure_1d(x);
  Matrix q = cost_matrix(CostSpec::quadratic(), mu, mu);
  auto field = rate_field(diagonal(21), q, RateMethod::primal_exact);
  auto rep = positivity_scan(field, diagonal(21));
  // Neighbouring grid cells are joined by a single step, so I(x, x +- h) = 0.
  std::vector<IndexPair> neighbours;
  for (std::size_t i = 0; i < 21; ++i)
    for (std::size_t j = 0; j < 21; ++j)
      if (i == j + 1 || j == i + 1) neighbours.emplace_back(i, j);
  CHECK(rep.off_support_zero_pairs == neighbours);
  CHECK(rep.min_positive_value == doctest::Approx(0.005));

  auto nt = notwist(21);
  auto nf = rate_field(diagonal(21), nt.cost_table(), RateMethod::primal_exact);
  auto nrep = positivity_scan(nf, diagonal(21));
  // On the grid, the first superdiagonal also has I = h(h - h) = 0.
  std::vector<IndexPair> expected;
  for (std::size_t i = 0; i < 21; ++i)
    for (std::size_t j = 0; j < 21; ++j)
      if (j < i || j == i + 1) expected.emplace_back(i, j);
  CHECK(nrep.off_support_zero_pairs == expected);
  for (std::size_t i = 0; i < 21; ++i)
    for (std::size_t j = i; j < 21; ++j) {
      const double d = (static_cast<double>(j) - static_cast<double>(i)) / 20.0;
      CHECK(nf.at(i, j) == doctest::Approx(d * (d - 0.05)).scale(1.0).epsilon(1e-12));
    }

  auto s = two_by_two();
  auto tf = rate_field(*s.facts.gamma, s.cost_table(), RateMethod::primal_exact);
  CHECK(positivity_scan(tf, *s.facts.gamma).off_support_zero_pairs == std::vector<IndexPair>{{0, 1}, {1, 0}});
  CHECK(std::isinf(positivity_scan(tf, *s.facts.gamma).min_positive_value));
}

TEST_CASE("rate field methods agree and match single-point evaluation") {
  auto in = random_instance(11, 5, 5);
  auto exact = rate_field(in.g, in.c, RateMethod::primal_exact);
  auto brute = rate_field(in.g, in.c, RateMethod::primal_brute, {.k_max = static_cast<int>(std::min<std::size_t>(in.g.size() + 1, 6))});
  REQUIRE(exact.values.rows() == static_cast<Eigen::Index>(in.g.x_proj().size()));
  REQUIRE(exact.values.cols() == static_cast<Eigen::Index>(in.g.y_proj().size()));
  if (in.g.size() <= 5) CHECK((exact.values - brute.values).cwiseAbs().maxCoeff() <= 1e-10);
  for (std::size_t i : in.g.x_proj())
    for (std::size_t j : in.g.y_proj()) CHECK(std::abs(exact.at(i, j) - rate_primal_exact(in.g, in.c, {i, j})) <= 1e-12);
  CHECK((exact.values.array() >= -1e-12).all());
  CHECK_THROWS_AS(exact.at(99, 0), DomainError);

  auto threaded = rate_field(in.g, in.c, RateMethod::primal_exact, {.threads = 4});
  CHECK(threaded.values == exact.values);
  CHECK(parse_rate_method(to_string(RateMethod::dual)) == RateMethod::dual);
  CHECK_THROWS_AS(parse_rate_method("nope"), InvalidArgument);
}

TEST_CASE("rate is positive off a staircase support at interior rows") {
  for (const char* n : {"31", "61"}) {
    auto s = make_scenario(ScenarioKind::gaussian1d, {{"n", n}});
    Matrix c = s.cost_table();
    auto g = extract_support(solve_exact(s.mu, s.nu, c));
    REQUIRE(independence_probe(g, c, 4).passed());
    auto field = rate_field(g, c, RateMethod::primal_exact);
    const auto& xs = g.x_proj();
    for (std::size_t a = 1; a + 1 < xs.size(); ++a)
      for (std::size_t j : g.y_proj())
        if (!g.contains({xs[a], j})) CHECK(field.at(xs[a], j) > kPositivityTol);
  }
}

TEST_CASE("rate field on supports with split atoms matches single-point evaluation") {
  for (const char* n : {"30", "64"}) {
    auto s = make_scenario(ScenarioKind::semidiscrete, {{"n", n}});
    Matrix c = s.cost_table();
    const SupportSet& g = *s.facts.gamma;
    auto field = rate_field(g, c, RateMethod::primal_exact);
    for (std::size_t i : g.x_proj())
      for (std::size_t j : g.y_proj()) CHECK(std::abs(field.at(i, j) - rate_primal_exact(g, c, {i, j})) <= 1e-12);
  }
}
