#include "ldot/scenarios.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "ldot/errors.hpp"
#include "ldot/exact.hpp"

namespace ldot {

namespace {

class ParamReader {
 public:
  ParamReader(ScenarioKind kind, const ScenarioParams& params) : kind_(kind), params_(params) {}

  double number(const std::string& key, double fallback) {
    used_.insert(key);
    const auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    return parse(key, it->second);
  }

  long integer(const std::string& key, long fallback) {
    const double v = number(key, static_cast<double>(fallback));
    if (v != std::floor(v)) fail(key, "must be an integer");
    return static_cast<long>(v);
  }

  bool has(const std::string& key) const { return params_.count(key) != 0; }

  std::vector<double> list(const std::string& key) {
    used_.insert(key);
    std::vector<double> out;
    const auto it = params_.find(key);
    if (it == params_.end()) return out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ';')) out.push_back(parse(key, item));
    return out;
  }

  void finish() const {
    for (const auto& [key, value] : params_)
      if (!used_.count(key)) fail(key, "is not a parameter of this scenario");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw InvalidArgument(std::string(to_string(kind_)) + ": parameter '" + key + "' " + what);
  }

 private:
  double parse(const std::string& key, const std::string& text) const {
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
      fail(key, "is not a number: '" + text + "'");
    return v;
  }

  ScenarioKind kind_;
  const ScenarioParams& params_;
  std::set<std::string> used_;
};

// P(lo < X < hi) for X ~ N(0, sigma^2), accurate in both tails.
double normal_cell(double lo, double hi, double sigma) {
  const double s = sigma * std::sqrt(2.0);
  if (lo >= 0.0) return 0.5 * (std::erfc(lo / s) - std::erfc(hi / s));
  if (hi <= 0.0) return 0.5 * (std::erfc(-hi / s) - std::erfc(-lo / s));
  return 0.5 * (std::erf(hi / s) - std::erf(lo / s));
}

std::vector<double> uniform_grid(long n, double lo, double hi) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) x[static_cast<std::size_t>(k)] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  return x;
}

Scenario gaussian1d(ParamReader& p) {
  const long n = p.integer("n", 401);
  const double a = p.number("a", 1.0);
  const double b = p.number("b", 2.0);
  if (n < 2) p.fail("n", "must be at least 2");
  if (!(a > 0.0)) p.fail("a", "must be positive");
  if (!(b > 0.0)) p.fail("b", "must be positive");
  const double L = p.number("L", 8.0 * std::max(a, b));
  if (!(L > 0.0)) p.fail("L", "must be positive");
  p.finish();

  const std::vector<double> x = uniform_grid(n, -L, L);
  const double h = 2.0 * L / static_cast<double>(n - 1);
  std::vector<double> wa, wb;
  for (double xi : x) {
    wa.push_back(normal_cell(xi - h / 2, xi + h / 2, a));
    wb.push_back(normal_cell(xi - h / 2, xi + h / 2, b));
  }
  DiscreteMeasure mu = build_measure_1d(x, wa);
  DiscreteMeasure nu = build_measure_1d(x, wb);

  // Monge map T(x) = (b/a) x, rounded to the nu grid.
  std::vector<IndexPair> graph;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double t = (b / a) * mu.coord(i);
    std::size_t best = 0;
    for (std::size_t j = 1; j < nu.size(); ++j)
      if (std::abs(nu.coord(j) - t) < std::abs(nu.coord(best) - t)) best = j;
    if (std::abs(nu.coord(best) - t) <= h / 2) graph.emplace_back(i, best);
  }

  KnownFacts facts;
  if (!graph.empty()) facts.gamma = SupportSet(graph);
  facts.cost_gap_slope = 0.5;
  facts.monge_slope = b / a;
  facts.exponent_alpha = a / b;
  return {"gaussian1d", ScenarioKind::gaussian1d, std::move(mu), std::move(nu),
          CostSpec::quadratic(), std::move(facts), h};
}

Scenario assignment2x2(ParamReader& p) {
  const double c12 = p.number("c12", 1.0);
  const double c21 = p.number("c21", 2.0);
  p.finish();
  if (c12 < 0.0 || c21 < 0.0) p.fail("c12/c21", "must be nonnegative");
  const double delta = c12 + c21;
  if (!(delta > 0.0)) p.fail("c12+c21", "must be positive");
  const std::vector<double> labels{1.0, 2.0}, w{1.0, 1.0};
  Matrix c(2, 2);
  c << 0.0, c12, c21, 0.0;
  KnownFacts facts;
  facts.gamma = SupportSet({{0, 0}, {1, 1}});
  facts.rate_closed_form = "I = 0";
  facts.rate = [](double, double) { return 0.0; };
  facts.off_diagonal_rate = delta / 2.0;
  facts.cost_gap_slope = 0.0;
  return {"assignment2x2", ScenarioKind::assignment2x2, build_measure_1d(labels, w),
          build_measure_1d(labels, w), CostSpec::matrix(c), std::move(facts), 0.0};
}

Scenario notwist(ParamReader& p) {
  const long n = p.integer("n", 101);
  if (n < 2) p.fail("n", "must be at least 2");
  p.finish();
  const std::vector<double> x = uniform_grid(n, 0.0, 1.0);
  std::vector<IndexPair> diag;
  for (std::size_t i = 0; i < x.size(); ++i) diag.emplace_back(i, i);
  KnownFacts facts;
  facts.gamma = SupportSet(diag);
  facts.rate_closed_form = "I(x,y) = (y-x)^2 for y >= x, 0 otherwise";
  facts.rate = [](double xx, double yy) { return yy >= xx ? (yy - xx) * (yy - xx) : 0.0; };
  return {"notwist", ScenarioKind::notwist, uniform_measure_1d(x), uniform_measure_1d(x),
          CostSpec::notwist(), std::move(facts), 1.0 / static_cast<double>(n - 1)};
}

Scenario semidiscrete(ParamReader& p) {
  const long n = p.integer("n", 50);
  if (n < 2) p.fail("n", "must be at least 2");
  std::vector<double> atoms = p.list("atoms");
  std::vector<double> weights = p.list("weights");
  if (atoms.empty()) {
    const long k = p.integer("k", 3);
    if (k < 1) p.fail("k", "must be positive");
    // Uneven weights keep the partial sums of nu off the mu grid.
    for (long t = 0; t < k; ++t) {
      atoms.push_back((static_cast<double>(t) + 0.5) / static_cast<double>(k));
      weights.push_back(1.0 + 0.37 * static_cast<double>(t));
    }
  } else {
    if (p.has("k")) p.fail("k", "cannot be combined with atoms");
    if (weights.empty()) weights.assign(atoms.size(), 1.0);
    if (weights.size() != atoms.size()) p.fail("weights", "must match atoms in length");
  }
  p.finish();
  DiscreteMeasure mu = uniform_measure_1d(uniform_grid(n, 0.0, 1.0));
  DiscreteMeasure nu = build_measure_1d(atoms, weights);
  KnownFacts facts;
  facts.gamma = extract_support(solve_exact(mu, nu, CostSpec::quadratic()));
  facts.rate_closed_form = "I = 0 exactly on the support within X0 x Y0";
  return {"semidiscrete", ScenarioKind::semidiscrete, std::move(mu), std::move(nu),
          CostSpec::quadratic(), std::move(facts), 1.0 / static_cast<double>(n - 1)};
}

Scenario random_monotone(ParamReader& p, std::uint64_t seed) {
  const long n = p.integer("n", 6);
  const long m = p.integer("m", n);
  const bool integer_weights = p.integer("integer_weights", 0) != 0;
  if (n < 1 || m < 1) p.fail("n/m", "must be positive");
  p.finish();
  std::mt19937_64 rng(seed);
  auto draw = [&](long count) {
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    std::uniform_real_distribution<double> weight(0.5, 1.5);
    std::uniform_int_distribution<int> small(1, 4);
    std::set<double> pts;
    while (pts.size() < static_cast<std::size_t>(count)) pts.insert(coord(rng));
    std::vector<double> x(pts.begin(), pts.end()), w;
    for (long k = 0; k < count; ++k) w.push_back(integer_weights ? small(rng) : weight(rng));
    return build_measure_1d(x, w);
  };
  DiscreteMeasure mu = draw(n);
  DiscreteMeasure nu = draw(m);
  return {"random_monotone", ScenarioKind::random_monotone, std::move(mu), std::move(nu),
          CostSpec::quadratic(), KnownFacts{}, 0.0};
}

}  // namespace

Matrix Scenario::cost_table() const { return cost_matrix(cost, mu, nu); }

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::gaussian1d:
      return "gaussian1d";
    case ScenarioKind::assignment2x2:
      return "assignment2x2";
    case ScenarioKind::notwist:
      return "notwist";
    case ScenarioKind::semidiscrete:
      return "semidiscrete";
    case ScenarioKind::random_monotone:
      return "random_monotone";
  }
  return "?";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
  for (auto k : {ScenarioKind::gaussian1d, ScenarioKind::assignment2x2, ScenarioKind::notwist,
                 ScenarioKind::semidiscrete, ScenarioKind::random_monotone})
    if (to_string(k) == name) return k;
  throw InvalidArgument("unknown scenario '" + std::string(name) + "'");
}

ScenarioSpec parse_scenario_spec(std::string_view text) {
  const auto colon = text.find(':');
  ScenarioSpec spec{parse_scenario_kind(text.substr(0, colon)), {}};
  if (colon == std::string_view::npos) return spec;
  std::string rest(text.substr(colon + 1));
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw InvalidArgument("scenario parameter '" + item + "' is not key=value");
    if (!spec.params.emplace(item.substr(0, eq), item.substr(eq + 1)).second)
      throw InvalidArgument("scenario parameter '" + item.substr(0, eq) + "' given twice");
  }
  return spec;
}

Scenario make_scenario(ScenarioKind kind, const ScenarioParams& params, std::uint64_t seed) {
  ParamReader reader(kind, params);
  switch (kind) {
    case ScenarioKind::gaussian1d:
      return gaussian1d(reader);
    case ScenarioKind::assignment2x2:
      return assignment2x2(reader);
    case ScenarioKind::notwist:
      return notwist(reader);
    case ScenarioKind::semidiscrete:
      return semidiscrete(reader);
    case ScenarioKind::random_monotone:
      return random_monotone(reader, seed);
  }
  throw InvalidArgument("unknown scenario kind");
}

Scenario make_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
  return make_scenario(spec.kind, spec.params, seed);
}

}  // namespace ldot
