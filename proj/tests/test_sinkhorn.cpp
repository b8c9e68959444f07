#include <cfloat>
#include <cmath>
#include <random>

#include "doctest.h"
#include "ldot/block_balance.hpp"
#include "ldot/ldot.hpp"
#include "oracles/oracles.hpp"

using namespace ldot;

namespace {

DiscreteMeasure two_atoms() { return build_measure_1d(std::vector<double>{1, 2}, std::vector<double>{1, 1}); }

Matrix two_by_two(double c12, double c21) {
  Matrix c(2, 2);
  c << 0, c12, c21, 0;
  return c;
}

DiscreteMeasure random_measure(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> w(0.2, 1.0);
  std::vector<double> x, ww;
  for (int i = 0; i < n; ++i) {
    x.push_back(i + 0.25 * w(rng));
    ww.push_back(w(rng));
  }
  return build_measure_1d(x, ww);
}

double lse_row(const EntropicSolution& s, const Matrix& c, std::size_t i) {
  double top = -INFINITY, acc = 0.0;
  for (std::size_t j = 0; j < s.log_g.size(); ++j)
    top = std::max(top, std::log(s.coupling.nu().weight(j)) + s.log_g[j] - c(i, j) / s.epsilon);
  for (std::size_t j = 0; j < s.log_g.size(); ++j)
    acc += std::exp(std::log(s.coupling.nu().weight(j)) + s.log_g[j] - c(i, j) / s.epsilon - top);
  return top + std::log(acc);
}

}  // namespace

TEST_CASE("gibbs reference") {
  auto h = two_atoms();
  auto zero = gibbs_reference(Matrix::Zero(2, 2), h, h, 0.3);
  CHECK(zero.log_alpha == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(zero.log_density.cwiseAbs().maxCoeff() < 1e-15);

  const double delta = 0.7;
  Matrix c(2, 2);
  c << 0, delta, 0, 0;
  auto r = gibbs_reference(c, h, h, delta);
  CHECK(std::exp(r.log_alpha) == doctest::Approx(4.0 / (3.0 + std::exp(-1.0))).epsilon(1e-14));
  CHECK(std::exp(r.log_alpha) ==
        doctest::Approx(oracle::gibbs_alpha_direct(c, h.weights(), h.weights(), delta)).epsilon(1e-14));
  CHECK(r.log_density(0, 1) == doctest::Approx(r.log_alpha - 1.0));
  CHECK_THROWS_AS(gibbs_reference(c, h, h, 0.0), InvalidArgument);
}

TEST_CASE("gibbs reference integrates to one and survives tiny epsilon") {
  auto s = make_scenario(ScenarioKind::notwist, {{"n", "21"}});
  for (double eps : {1.0, 1e-2, 1e-4}) {
    auto r = gibbs_reference(s.cost, s.mu, s.nu, eps);
    double total = 0.0;
    for (std::size_t i = 0; i < s.mu.size(); ++i)
      for (std::size_t j = 0; j < s.nu.size(); ++j)
        total += s.mu.weight(i) * s.nu.weight(j) * std::exp(r.log_density(i, j));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
  auto g = make_scenario(ScenarioKind::gaussian1d, {{"n", "51"}});
  auto r = gibbs_reference(g.cost, g.mu, g.nu, 1e-3);
  CHECK(std::isfinite(r.log_alpha));
}

TEST_CASE("zero cost gives the product coupling") {
  std::mt19937_64 rng(1);
  auto mu = random_measure(rng, 4), nu = random_measure(rng, 3);
  auto s = solve_entropic(mu, nu, Matrix::Zero(4, 3), 0.1);
  REQUIRE(s.converged);
  for (double f : s.log_f) CHECK(std::abs(f) < 1e-14);
  for (double g : s.log_g) CHECK(std::abs(g) < 1e-14);
  CHECK((s.coupling.mass() - Coupling::product(mu, nu).mass()).cwiseAbs().maxCoeff() < 1e-16);
}

TEST_CASE("2x2 fixed point matches the closed form") {
  auto h = two_atoms();
  auto s = solve_entropic(h, h, two_by_two(1, 2), 0.5, {.tol = 1e-13});
  REQUIRE(s.converged);
  const double q = oracle::q_2x2(3.0, 0.5);
  CHECK(std::abs(q - 0.0237129) < 1e-7);
  CHECK(s.coupling.mass(0, 1) == doctest::Approx(q).epsilon(1e-10));
  CHECK(s.coupling.mass(1, 0) == doctest::Approx(q).epsilon(1e-10));
  CHECK(s.coupling.mass(0, 0) == doctest::Approx(0.5 - q).epsilon(1e-10));
}

TEST_CASE("2x2 ladder resolves exponentially small off-diagonal mass") {
  auto h = two_atoms();
  SinkhornOptions o;
  o.tol = 1e-14;
  for (double eps : geometric_ladder(0.4)) {
    auto s = solve_entropic(h, h, two_by_two(1, 2), eps, o);
    REQUIRE(s.converged);
    const double q = oracle::q_2x2(3.0, eps);
    CHECK(std::abs(std::exp(s.log_mass(0, 1)) / q - 1.0) < 1e-8);
    CHECK(std::abs(s.coupling.mass(1, 0) / q - 1.0) < 1e-8);
    o.warm_start = s.warm_start();
  }
}

TEST_CASE("factorized form and strict positivity") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 5; ++t) {
    auto mu = random_measure(rng, 6), nu = random_measure(rng, 5);
    Matrix c = cost_matrix(CostSpec::quadratic(), mu, nu);
    auto s = solve_entropic(mu, nu, c, 0.3);
    REQUIRE(s.converged);
    CHECK(s.marginal_residual <= 1e-9);
    double sum = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) sum += mu.weight(i) * s.log_f[i];
    CHECK(std::abs(sum) < 1e-12);
    for (std::size_t i = 0; i < mu.size(); ++i)
      for (std::size_t j = 0; j < nu.size(); ++j) {
        const double model = mu.weight(i) * nu.weight(j) * std::exp(s.log_f[i] + s.log_g[j] - c(i, j) / 0.3);
        CHECK(std::abs(s.coupling.mass(i, j) / model - 1.0) < 1e-10);
        CHECK(s.coupling.mass(i, j) > 0.0);
      }
  }
}

TEST_CASE("one more half iteration moves log_f by less than tol") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 5; ++t) {
    auto mu = random_measure(rng, 7), nu = random_measure(rng, 6);
    Matrix c = cost_matrix(CostSpec::quadratic(), mu, nu);
    SinkhornOptions o;
    o.tol = 1e-9;
    auto s = solve_entropic(mu, nu, c, 0.2, o);
    REQUIRE(s.converged);
    for (std::size_t i = 0; i < mu.size(); ++i) CHECK(std::abs(-lse_row(s, c, i) - s.log_f[i]) < o.tol);
  }
}

TEST_CASE("cyclical invariance residual") {
  auto g = make_scenario(ScenarioKind::gaussian1d, {{"n", "61"}});
  Matrix c = g.cost_table();
  auto s = solve_entropic(g.mu, g.nu, c, 0.5);
  REQUIRE(s.converged);
  for (int k = 2; k <= 5; ++k) CHECK(invariance_residual(s, c, k, 1000, 42) <= 1e-8);

  std::vector<IndexPair> same(4, IndexPair{3, 7});
  CHECK(cycle_invariance_defect(s, c, same) == 0.0);
  CHECK_THROWS_AS(invariance_residual(s, c, 1, 10, 0), InvalidArgument);

  // A coupling that is not of factorized form shows a defect.
  auto broken = s;
  Matrix m = broken.coupling.mass();
  m(0, 0) *= 2.0;
  broken.coupling = Coupling::unchecked(m, g.mu, g.nu);
  std::vector<IndexPair> tuple{{0, 0}, {1, 1}};
  CHECK(std::abs(cycle_invariance_defect(broken, c, tuple)) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("k=2 invariance on all pairs carries over to k=5") {
  auto h = two_atoms();
  auto s = solve_entropic(h, h, two_by_two(1, 2), 0.3);
  Matrix c = two_by_two(1, 2);
  double worst2 = 0.0;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      std::vector<IndexPair> t{{a / 2, a % 2}, {b / 2, b % 2}};
      worst2 = std::max(worst2, std::abs(cycle_invariance_defect(s, c, t)));
    }
  CHECK(worst2 <= 1e-10);
  CHECK(invariance_residual(s, c, 5, 2000, 1) <= 1e-10);
}

TEST_CASE("warm-started ladder agrees with cold starts") {
  auto g = make_scenario(ScenarioKind::gaussian1d, {{"n", "41"}});
  Matrix c = g.cost_table();
  SinkhornOptions warm;
  warm.tol = 1e-12;
  SinkhornOptions cold = warm;
  for (double eps : geometric_ladder(0.8, kDefaultLadderRatio, 4)) {
    auto a = solve_entropic(g.mu, g.nu, c, eps, warm);
    auto b = solve_entropic(g.mu, g.nu, c, eps, cold);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    // Both are gauge-fixed, so no additive constant remains.
    for (std::size_t i = 0; i < a.log_f.size(); ++i) CHECK(std::abs(a.log_f[i] - b.log_f[i]) < 1e-8);
    warm.warm_start = a.warm_start();
  }
}

TEST_CASE("entropic objective beats random feasible couplings on tiny instances") {
  std::mt19937_64 rng(2024);
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 3; ++m) {
      auto mu = random_measure(rng, n), nu = random_measure(rng, m);
      Matrix c = cost_matrix(CostSpec::quadratic(), mu, nu);
      const double eps = 0.4;
      auto s = solve_entropic(mu, nu, c, eps, {.tol = 1e-13});
      REQUIRE(s.converged);
      const double best = oracle::entropic_objective(s.coupling.mass(), c, mu.weights(), nu.weights(), eps);
      int worse = 0;
      for (int t = 0; t < 1000; ++t) {
        Matrix p = oracle::random_feasible_coupling(mu.weights(), nu.weights(), rng);
        if (oracle::entropic_objective(p, c, mu.weights(), nu.weights(), eps) >= best - 1e-12) ++worse;
      }
      CHECK(worse == 1000);
    }
}

TEST_CASE("non-convergence is reported, not thrown") {
  auto g = make_scenario(ScenarioKind::gaussian1d, {{"n", "41"}});
  SinkhornOptions o;
  o.max_iter = 2;
  o.block_balance = false;
  auto s = solve_entropic(g.mu, g.nu, g.cost, 0.05, o);
  CHECK_FALSE(s.converged);
  CHECK(s.iterations == 2);
  CHECK(s.marginal_residual > o.tol);
}

TEST_CASE("solver preconditions") {
  auto h = two_atoms();
  CHECK_THROWS_AS(solve_entropic(h, h, two_by_two(1, 2), 0.0), InvalidArgument);
  CHECK_THROWS_AS(solve_entropic(h, h, two_by_two(1, 2), -1.0), InvalidArgument);
  CHECK_THROWS_AS(solve_entropic(h, h, Matrix::Zero(3, 2), 1.0), InvalidArgument);
  SinkhornOptions o;
  o.warm_start = WarmStart{{0.0}, {0.0, 0.0}, 1.0};
  CHECK_THROWS_AS(solve_entropic(h, h, two_by_two(1, 2), 1.0, o), InvalidArgument);
}

TEST_CASE("threaded sweeps match the serial solve") {
  auto g = make_scenario(ScenarioKind::gaussian1d, {{"n", "201"}});
  Matrix c = g.cost_table();
  SinkhornOptions serial, threaded;
  threaded.threads = 4;
  auto a = solve_entropic(g.mu, g.nu, c, 0.2, serial);
  auto b = solve_entropic(g.mu, g.nu, c, 0.2, threaded);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK((a.coupling.mass() - b.coupling.mass()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gaussian conditional profile matches the closed-form exponent") {
  const double a = 1.0, b = 2.0, eps = 0.1;
  auto g = make_scenario(ScenarioKind::gaussian1d, {{"n", "401"}, {"L", "8"}});
  auto s = solve_entropic(g.mu, g.nu, g.cost, eps);
  REQUIRE(s.converged);
  // At x = 0 the conditional mean is 0; log pi(0, y) is a parabola in y.
  const std::size_t i0 = 200, j0 = 200;
  const double h = g.grid_spacing;
  for (int d : {1, 4, 10}) {
    const double curv = (s.log_mass(i0, j0 + d) - 2 * s.log_mass(i0, j0) + s.log_mass(i0, j0 - d)) / (d * d * h * h);
    CHECK(-curv * eps / 2.0 == doctest::Approx(oracle::gaussian_alpha(a, b, eps)).epsilon(2e-3));
  }
  REQUIRE(g.facts.exponent_alpha.has_value());
  CHECK(oracle::gaussian_alpha(a, b, 1e-8) == doctest::Approx(*g.facts.exponent_alpha).epsilon(1e-8));
}

TEST_CASE("grounded Laplacian solve") {
  // Path 0 - 1 - 2 with unit weights; ground at node 2.
  Matrix w = Matrix::Zero(3, 3);
  w(0, 1) = w(1, 0) = 1.0;
  w(1, 2) = w(2, 1) = 1.0;
  auto t = detail::solve_grounded_laplacian(w, {1.0, 0.0, -1.0});
  CHECK(t[2] == 0.0);
  CHECK(t[1] == doctest::Approx(1.0));
  CHECK(t[0] == doctest::Approx(2.0));
  // Weights spanning many orders of magnitude stay accurate.
  w(0, 1) = w(1, 0) = 1e-30;
  t = detail::solve_grounded_laplacian(w, {1e-30, 0.0, -1e-30});
  CHECK(t[0] == doctest::Approx(1.0 + 1e-30));
}

TEST_CASE("strong blocks of a nearly diagonal coupling") {
  Matrix kernel(2, 2);
  kernel << 0.0, -40.0, -40.0, 0.0;
  std::vector<double> lmu{std::log(0.5), std::log(0.5)}, lnu = lmu, mu{0.5, 0.5}, nu = mu;
  std::vector<double> a{0.0, 0.0}, b{0.0, 0.0};
  detail::ScalingState st{kernel, lmu, lnu, mu, nu, a, b};
  auto blocks = detail::strong_blocks(st, 1e-3);
  CHECK(blocks.count == 2);
  CHECK(blocks.row_block[0] == blocks.col_block[0]);
  CHECK(blocks.row_block[0] != blocks.row_block[1]);
  // Balanced already: flows between the blocks are equal.
  CHECK(detail::balance_blocks(st, blocks) < 1e-12);
}
