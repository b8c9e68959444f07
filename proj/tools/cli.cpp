#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <utility>

#include "ldot/ldot.hpp"

namespace ldot::cli {

namespace fs = std::filesystem;

namespace {

class NotConverged : public Error {
 public:
  using Error::Error;
};

struct Instance {
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  Matrix cost;
  double grid_spacing = 0.0;
  std::optional<Scenario> scenario;
};

// Probe with up to this many base pairs.
constexpr int kProbeBases = 4;

// Ordered key=value lines, echoed to the log.
class Report {
 public:
  void add(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
  void add(const std::string& key, double value) { add(key, format_number(value)); }
  void add(const std::string& key, std::size_t value) { add(key, std::to_string(value)); }
  void add(const std::string& key, int value) { add(key, std::to_string(value)); }
  void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }

  void write(std::ostream& out) const {
    for (const auto& [k, v] : rows_) out << k << '=' << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  const fs::path path = fs::path(cfg.out) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  return out;
}

void write_report(const RunConfig& cfg, const std::string& name, const Report& rep,
                  std::ostream& log) {
  auto out = open_out(cfg, name);
  rep.write(out);
  rep.write(log);
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string join_point(std::span<const double> p) {
  std::string s;
  for (std::size_t d = 0; d < p.size(); ++d) {
    if (d) s += ',';
    s += format_number(p[d]);
  }
  return s;
}

std::string coord_header(const char* prefix, std::size_t dim) {
  if (dim == 1) return prefix;
  std::string s;
  for (std::size_t d = 0; d < dim; ++d) {
    if (d) s += ',';
    s += std::string(prefix) + "_" + std::to_string(d + 1);
  }
  return s;
}

Instance load_instance(const RunConfig& cfg) {
  Instance in;
  if (cfg.scenario) {
    Scenario s = make_scenario(parse_scenario_spec(*cfg.scenario), cfg.seed);
    in.mu = s.mu;
    in.nu = s.nu;
    in.cost = s.cost_table();
    in.grid_spacing = s.grid_spacing;
    in.scenario = std::move(s);
    return in;
  }
  in.mu = read_measure_csv(*cfg.mu_path);
  in.nu = read_measure_csv(*cfg.nu_path);
  const std::string cost = cfg.cost.value_or("quadratic");
  if (cost == "quadratic" || cost == "notwist") {
    in.cost = cost_matrix(cost == "quadratic" ? CostSpec::quadratic() : CostSpec::notwist(), in.mu, in.nu);
  } else {
    Matrix table = read_cost_csv(cost);
    if (static_cast<std::size_t>(table.rows()) != in.mu.size() ||
        static_cast<std::size_t>(table.cols()) != in.nu.size())
      throw InvalidArgument("cost table " + cost + " is " + std::to_string(table.rows()) + "x" +
                            std::to_string(table.cols()) + ", marginals have " +
                            std::to_string(in.mu.size()) + " and " + std::to_string(in.nu.size()) +
                            " atoms");
    in.cost = cost_matrix(CostSpec::matrix(std::move(table)), in.mu, in.nu);
  }
  return in;
}

SinkhornOptions solver_options(const RunConfig& cfg) {
  SinkhornOptions o;
  o.tol = cfg.tol;
  o.max_iter = cfg.max_iter;
  o.threads = cfg.threads;
  return o;
}

double require_epsilon(const RunConfig& cfg) {
  if (!cfg.epsilon) throw InvalidArgument("--eps is required for this command");
  return *cfg.epsilon;
}

std::vector<double> ladder_of(const RunConfig& cfg) {
  const Ladder l = cfg.ladder.value_or(Ladder{});
  return geometric_ladder(l.start, l.ratio, l.count);
}

SupportSet gamma_of(const RunConfig& cfg, const Instance& in) {
  if (cfg.gamma == GammaSource::exact) return extract_support(solve_exact(in.mu, in.nu, in.cost));
  const double eps = cfg.epsilon ? *cfg.epsilon : ladder_of(cfg).back();
  auto sol = solve_entropic(in.mu, in.nu, in.cost, eps, solver_options(cfg));
  if (!sol.converged)
    throw NotConverged("Sinkhorn did not converge at eps=" + format_number(eps) + " for the support");
  return extract_support(sol.coupling, cfg.threshold);
}

int probe_bases(const SupportSet& g) {
  return g.size() == 1 ? 1 : static_cast<int>(std::min<std::size_t>(kProbeBases, g.size()));
}

std::vector<RateMethod> methods_of(const std::string& name) {
  if (name == "all") return {RateMethod::primal_brute, RateMethod::primal_exact, RateMethod::dual};
  if (name == "primal") return {RateMethod::primal_brute};
  if (name == "exact") return {RateMethod::primal_exact};
  if (name == "dual") return {RateMethod::dual};
  throw InvalidArgument("unknown method '" + name + "' (primal, exact, dual, all)");
}

RateFieldOptions field_options(const RunConfig& cfg, const SupportSet& g) {
  RateFieldOptions o;
  o.k_max = cfg.k_max;
  o.base_pair = g.pairs().front();
  o.threads = cfg.threads;
  return o;
}

// ---------------------------------------------------------------------------

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
  const Instance in = load_instance(cfg);
  const double eps = require_epsilon(cfg);
  const auto sol = solve_entropic(in.mu, in.nu, in.cost, eps, solver_options(cfg));

  auto cout = open_out(cfg, "coupling.csv");
  write_matrix_csv(cout, sol.coupling.mass());
  auto dout = open_out(cfg, "duals.csv");
  dout << "side,index,log_factor\n";
  for (std::size_t i = 0; i < sol.log_f.size(); ++i) dout << "x," << i << ',' << format_number(sol.log_f[i]) << '\n';
  for (std::size_t j = 0; j < sol.log_g.size(); ++j) dout << "y," << j << ',' << format_number(sol.log_g[j]) << '\n';

  Report rep;
  rep.add("command", std::string("solve"));
  rep.add("epsilon", eps);
  rep.add("converged", sol.converged);
  rep.add("iterations", sol.iterations);
  rep.add("marginal_residual", sol.marginal_residual);
  rep.add("transport_cost", transport_cost(sol.coupling, in.cost));
  if (sol.converged)
    for (int k = 2; k <= 5; ++k)
      rep.add("invariance_residual_k" + std::to_string(k), invariance_residual(sol, in.cost, k, 1000, cfg.seed));
  write_report(cfg, "report.txt", rep, log);
  return sol.converged ? kOk : kNotConverged;
}

int cmd_exact(const RunConfig& cfg, std::ostream& log) {
  const Instance in = load_instance(cfg);
  const Coupling pi = solve_exact(in.mu, in.nu, in.cost);
  const SupportSet g = extract_support(pi);

  auto cout = open_out(cfg, "coupling.csv");
  write_matrix_csv(cout, pi.mass());
  auto sout = open_out(cfg, "support.csv");
  sout << "x_index,y_index\n";
  for (const auto& [i, j] : g.pairs()) sout << i << ',' << j << '\n';

  const int k_max = cfg.k_max > 0 ? cfg.k_max : 4;
  MonotonicityOptions mo;
  mo.seed = cfg.seed;
  const auto violations = monotonicity_check(g, in.cost, k_max, mo);

  Report rep;
  rep.add("command", std::string("exact"));
  rep.add("transport_cost", transport_cost(pi, in.cost));
  rep.add("support_size", g.size());
  rep.add("is_graph", g.graph_map().has_value());
  rep.add("monotonicity_kmax", k_max);
  rep.add("monotonicity_violations", violations.size());
  if (violations.empty()) {
    const auto pot = rockafellar_potential(g, in.cost, g.pairs().front());
    auto pout = open_out(cfg, "potentials.csv");
    pout << "side,index,value\n";
    for (std::size_t k = 0; k < pot.x_indices.size(); ++k)
      pout << "x," << pot.x_indices[k] << ',' << format_number(pot.psi[k]) << '\n';
    for (std::size_t k = 0; k < pot.y_indices.size(); ++k)
      pout << "y," << pot.y_indices[k] << ',' << format_number(pot.psi_c[k]) << '\n';
    rep.add("base_pair", std::to_string(pot.base_pair.first) + ":" + std::to_string(pot.base_pair.second));
  }
  write_report(cfg, "report.txt", rep, log);
  return violations.empty() ? kOk : kInvariantViolation;
}

void write_field_rows(std::ostream& out, const RateField& f, const Instance& in) {
  const std::string method(to_string(f.method));
  for (std::size_t a = 0; a < f.x_indices.size(); ++a)
    for (std::size_t b = 0; b < f.y_indices.size(); ++b) {
      const std::size_t i = f.x_indices[a], j = f.y_indices[b];
      out << i << ',' << j << ',' << join_point(in.mu.point(i)) << ',' << join_point(in.nu.point(j))
          << ',' << format_number(f.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)))
          << ',' << method << '\n';
    }
}

int cmd_rate(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  const Instance in = load_instance(cfg);
  const auto methods = methods_of(cfg.method);
  const SupportSet g = gamma_of(cfg, in);
  const ProbeResult probe = independence_probe(g, in.cost, probe_bases(g));

  auto out = open_out(cfg, "rate_field.csv");
  out << "x_index,y_index," << coord_header("x_coord", in.mu.dim()) << ','
      << coord_header("y_coord", in.nu.dim()) << ",I_value,method\n";
  bool withheld = false;
  for (RateMethod m : methods) {
    if (m == RateMethod::dual && !probe.passed()) {
      err << "independence probe failed: potential spread " << format_number(probe.spread)
          << " exceeds " << format_number(kProbeTol) << "; dual field withheld\n";
      withheld = true;
      continue;
    }
    write_field_rows(out, rate_field(g, in.cost, m, field_options(cfg, g)), in);
  }

  Report rep;
  rep.add("command", std::string("rate"));
  rep.add("support_size", g.size());
  rep.add("probe_base_pairs", probe.base_pairs.size());
  rep.add("probe_spread", probe.spread);
  rep.add("probe_passed", probe.passed());
  rep.add("dual_withheld", withheld);
  write_report(cfg, "probe.txt", rep, log);
  return kOk;
}

std::vector<TargetSet> target_cells(const RateField& field) {
  std::vector<TargetSet> sets;
  for (std::size_t i : field.x_indices)
    for (std::size_t j : field.y_indices) sets.push_back({{i, j}});
  return sets;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  const Instance in = load_instance(cfg);
  const auto ladder = ladder_of(cfg);
  const SupportSet g = gamma_of(cfg, in);
  const ProbeResult probe = independence_probe(g, in.cost, probe_bases(g));
  const RateField field = rate_field(g, in.cost, RateMethod::primal_exact, field_options(cfg, g));

  SweepOptions so;
  so.solver = solver_options(cfg);
  so.min_valid_epsilon = in.grid_spacing * in.grid_spacing;
  const auto sets = target_cells(field);
  const SweepResult sw = epsilon_sweep(in.mu, in.nu, in.cost, ladder, sets, so);
  const CompareReport cmp = compare_rate_field(sw, field, probe.passed());

  auto sout = open_out(cfg, "sweep.csv");
  sout << "set_id,epsilon,mass,rate\n";
  for (std::size_t s = 0; s < sets.size(); ++s)
    for (std::size_t r = 0; r < ladder.size(); ++r)
      sout << s << ',' << format_number(ladder[r]) << ',' << format_number(sw.per_set_mass[s][r]) << ','
           << format_number(sw.per_set_rate[s][r]) << '\n';
  auto cout = open_out(cfg, "compare.csv");
  cout << "x_index,y_index,I,emp_rate,flag\n";
  for (const auto& c : cmp.cells)
    cout << c.cell.first << ',' << c.cell.second << ',' << format_number(c.rate) << ','
         << format_number(c.empirical) << ',' << c.flag << '\n';

  bool all_converged = true;
  std::size_t valid = 0;
  for (std::size_t r = 0; r < ladder.size(); ++r) {
    if (sw.valid[r]) ++valid;
    if (sw.valid[r] && !sw.converged[r]) all_converged = false;
  }
  Report rep;
  rep.add("command", std::string("sweep"));
  rep.add("rungs", ladder.size());
  rep.add("valid_rungs", valid);
  rep.add("all_converged", all_converged);
  rep.add("probe_spread", probe.spread);
  rep.add("compare_mode", std::string(cmp.mode == CompareMode::two_sided ? "two-sided" : "upper-bound only"));
  rep.add("cells", cmp.cells.size());
  rep.add("flagged_cells", cmp.flagged_cells);
  rep.add("max_abs_discrepancy", cmp.max_abs);
  write_report(cfg, "report.txt", rep, log);
  return all_converged ? kOk : kNotConverged;
}

struct Check {
  std::string name;
  double value;
  double limit;
  bool pass;
};

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  const Instance in = load_instance(cfg);
  const double eps = require_epsilon(cfg);
  const auto sol = solve_entropic(in.mu, in.nu, in.cost, eps, solver_options(cfg));
  if (!sol.converged)
    throw NotConverged("Sinkhorn did not converge at eps=" + format_number(eps) + " after " +
                       std::to_string(sol.iterations) + " iterations");

  std::vector<Check> checks;
  for (int k = 2; k <= 5; ++k) {
    const double r = invariance_residual(sol, in.cost, k, 1000, cfg.seed);
    checks.push_back({"invariance_residual_k" + std::to_string(k), r, 1e-8, r <= 1e-8});
  }

  for (int k = 2; k <= 3; ++k)
    for (double delta : {0.01, 0.05, 0.2}) {
      const auto b = product_bound_check(sol, in.cost, k, delta, 2000, cfg.seed);
      checks.push_back({"product_bound_k" + std::to_string(k) + "_delta" + short_number(delta),
                        b.lhs, b.rhs * (1.0 + kBoundSlack), b.pass});
    }

  const SupportSet g = gamma_of(cfg, in);
  const int k_max = cfg.k_max > 0 ? cfg.k_max : 4;
  MonotonicityOptions mo;
  mo.seed = cfg.seed;
  const auto viol = monotonicity_check(g, in.cost, k_max, mo);
  checks.push_back({"monotonicity_violations", static_cast<double>(viol.size()), 0.0, viol.empty()});

  if (viol.empty()) {
    const RateField exact = rate_field(g, in.cost, RateMethod::primal_exact, field_options(cfg, g));
    double on_gamma = 0.0;
    for (const auto& [i, j] : g.pairs()) on_gamma = std::max(on_gamma, std::abs(exact.at(i, j)));
    checks.push_back({"rate_zero_on_support", on_gamma, 1e-10, on_gamma <= 1e-10});

    // Brute force with k steps is a lower bound of the exact rate, equal once k > |support|.
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::size_t> px(0, exact.x_indices.size() - 1);
    std::uniform_int_distribution<std::size_t> py(0, exact.y_indices.size() - 1);
    const int k_brute = cfg.k_max > 0 ? cfg.k_max : 3;
    double over = 0.0, miss = 0.0;
    int sampled = 0;
    for (int t = 0; t < 20; ++t) {
      const IndexPair p{exact.x_indices[px(rng)], exact.y_indices[py(rng)]};
      double b;
      try {
        b = rate_primal_bruteforce(g, in.cost, p, k_brute);
      } catch (const BudgetExceeded&) {
        continue;
      }
      ++sampled;
      const double e = exact.at(p.first, p.second);
      over = std::max(over, b - e);
      if (static_cast<std::size_t>(k_brute) > g.size()) miss = std::max(miss, std::abs(b - e));
    }
    if (sampled > 0) {
      const double worst = std::max(over, miss);
      checks.push_back({"brute_vs_exact", worst, 1e-9, worst <= 1e-9});
    }

    const ProbeResult probe = independence_probe(g, in.cost, probe_bases(g));
    if (probe.passed()) {
      const RateField dual = rate_field(g, in.cost, RateMethod::dual, field_options(cfg, g));
      double diff = 0.0;
      for (Eigen::Index a = 0; a < exact.values.rows(); ++a)
        for (Eigen::Index b = 0; b < exact.values.cols(); ++b)
          diff = std::max(diff, std::abs(dual.values(a, b) - exact.values(a, b)) /
                                    std::max(1.0, std::abs(exact.values(a, b))));
      checks.push_back({"dual_vs_exact", diff, 1e-9, diff <= 1e-9});
    }
  }

  auto out = open_out(cfg, "verify.csv");
  out << "check,value,limit,status\n";
  bool ok = true;
  for (const auto& c : checks) {
    out << c.name << ',' << format_number(c.value) << ',' << format_number(c.limit) << ','
        << (c.pass ? "pass" : "fail") << '\n';
    log << (c.pass ? "pass  " : "FAIL  ") << c.name << " = " << format_number(c.value) << '\n';
    ok = ok && c.pass;
  }
  log << (ok ? "all checks passed\n" : "invariant violation\n");
  return ok ? kOk : kInvariantViolation;
}

int cmd_scenario(const RunConfig& cfg, std::ostream& log) {
  if (!cfg.scenario) throw InvalidArgument("scenario export needs --scenario");
  const Instance in = load_instance(cfg);
  const Scenario& s = *in.scenario;
  auto mout = open_out(cfg, "mu.csv");
  write_measure_csv(mout, s.mu);
  auto nout = open_out(cfg, "nu.csv");
  write_measure_csv(nout, s.nu);
  auto cout = open_out(cfg, "cost.csv");
  write_matrix_csv(cout, in.cost);

  Report rep;
  rep.add("name", s.name);
  rep.add("cost", std::string(to_string(s.cost.kind())));
  rep.add("mu_atoms", s.mu.size());
  rep.add("nu_atoms", s.nu.size());
  rep.add("grid_spacing", s.grid_spacing);
  if (s.facts.gamma) rep.add("gamma_size", s.facts.gamma->size());
  if (!s.facts.rate_closed_form.empty()) rep.add("rate", s.facts.rate_closed_form);
  if (s.facts.cost_gap_slope) rep.add("cost_gap_slope", *s.facts.cost_gap_slope);
  if (s.facts.monge_slope) rep.add("monge_slope", *s.facts.monge_slope);
  if (s.facts.exponent_alpha) rep.add("exponent_alpha", *s.facts.exponent_alpha);
  if (s.facts.off_diagonal_rate) rep.add("off_diagonal_rate", *s.facts.off_diagonal_rate);
  write_report(cfg, "facts.txt", rep, log);
  return kOk;
}

}  // namespace

Ladder parse_ladder(const std::string& text) {
  std::stringstream ss(text);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c) ||
      text.find(':', text.rfind(':') + 1) != std::string::npos)
    throw InvalidArgument("ladder must be start:ratio:count, got '" + text + "'");
  Ladder l;
  try {
    std::size_t pa, pb, pc;
    l.start = std::stod(a, &pa);
    l.ratio = std::stod(b, &pb);
    l.count = std::stoi(c, &pc);
    if (pa != a.size() || pb != b.size() || pc != c.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw InvalidArgument("ladder must be start:ratio:count, got '" + text + "'");
  }
  if (!(l.start > 0.0) || !(l.ratio > 0.0 && l.ratio < 1.0) || l.count < 1)
    throw InvalidArgument("ladder needs start > 0, 0 < ratio < 1 and count >= 1");
  return l;
}

void validate(const RunConfig& cfg) {
  const bool files = cfg.mu_path || cfg.nu_path;
  if (files && cfg.scenario) throw InvalidArgument("give either --mu/--nu or --scenario, not both");
  if (!files && !cfg.scenario) throw InvalidArgument("give --mu and --nu, or --scenario");
  if (files && !(cfg.mu_path && cfg.nu_path)) throw InvalidArgument("--mu and --nu go together");
  if (cfg.scenario && cfg.cost) throw InvalidArgument("--cost applies to file inputs only");
  if (cfg.epsilon && !(*cfg.epsilon > 0.0)) throw InvalidArgument("--eps must be positive");
  if (!(cfg.tol > 0.0)) throw InvalidArgument("--tol must be positive");
  if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0)) throw InvalidArgument("--threshold must lie in (0,1)");
  if (cfg.threads < 1) throw InvalidArgument("--threads must be at least 1");
  if (cfg.k_max < 0) throw InvalidArgument("--kmax must be nonnegative");
  methods_of(cfg.method);

  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (!fs::is_directory(cfg.out)) throw InvalidArgument("output directory " + cfg.out + " cannot be created");
  const fs::path probe = fs::path(cfg.out) / ".ldot_write_check";
  {
    std::ofstream t(probe);
    if (!t) throw InvalidArgument("output directory " + cfg.out + " is not writable");
  }
  fs::remove(probe, ec);
}

int run(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    validate(cfg);
    switch (cfg.command) {
      case Command::solve:
        return cmd_solve(cfg, log);
      case Command::exact:
        return cmd_exact(cfg, log);
      case Command::rate:
        return cmd_rate(cfg, log, err);
      case Command::sweep:
        return cmd_sweep(cfg, log);
      case Command::verify:
        return cmd_verify(cfg, log);
      case Command::scenario:
        return cmd_scenario(cfg, log);
    }
  } catch (const NotConverged& e) {
    err << "error: " << e.what() << '\n';
    return kNotConverged;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const PositiveCycleError& e) {
    err << "support is not cyclically monotone: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Entropic optimal transport and its large-deviations rate function"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string ladder, gamma = "exact";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--mu", cfg.mu_path, "source measure CSV");
    sub->add_option("--nu", cfg.nu_path, "target measure CSV");
    sub->add_option("--cost", cfg.cost, "cost table CSV, or quadratic / notwist");
    sub->add_option("--scenario", cfg.scenario, "built-in instance, kind[:key=value,...]");
    sub->add_option("--eps", cfg.epsilon, "regularization");
    sub->add_option("--ladder", ladder, "epsilon ladder start:ratio:count (default 0.4:0.7071:8)");
    sub->add_option("--method", cfg.method, "rate method: primal, exact, dual or all")->capture_default_str();
    sub->add_option("--kmax", cfg.k_max, "cycle length for brute force and monotonicity checks");
    sub->add_option("--threshold", cfg.threshold, "relative support threshold for Sinkhorn supports")
        ->capture_default_str();
    sub->add_option("--tol", cfg.tol, "Sinkhorn marginal tolerance")->capture_default_str();
    sub->add_option("--max-iter", cfg.max_iter, "Sinkhorn iteration cap")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed for sampling and random scenarios")->capture_default_str();
    sub->add_option("--out", cfg.out, "output directory")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "worker threads")->capture_default_str();
    sub->add_option("--gamma", gamma, "support used as Gamma: exact or sinkhorn")
        ->check(CLI::IsMember({"exact", "sinkhorn"}))
        ->capture_default_str();
  };

  const std::pair<const char*, Command> commands[] = {
      {"solve", Command::solve},   {"exact", Command::exact},   {"rate", Command::rate},
      {"sweep", Command::sweep},   {"verify", Command::verify}, {"scenario", Command::scenario},
  };
  const char* help[] = {
      "entropic coupling at --eps",
      "exact optimal coupling, support and potentials",
      "rate function on the support projections",
      "epsilon ladder and comparison with the rate function",
      "invariant suite on one instance",
      "export a built-in instance",
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (std::size_t k = 0; k < std::size(commands); ++k) {
    CLI::App* sub = app.add_subcommand(commands[k].first, help[k]);
    if (commands[k].second == Command::scenario) {
      // `scenario export --scenario ...`; the action word is optional.
      sub->add_option("action", "only 'export' is supported")->check(CLI::IsMember({"export"}));
    }
    common(sub);
    subs.emplace_back(sub, commands[k].second);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  for (const auto& [sub, cmd] : subs)
    if (sub->parsed()) cfg.command = cmd;
  cfg.gamma = gamma == "sinkhorn" ? GammaSource::sinkhorn : GammaSource::exact;
  if (!ladder.empty()) {
    try {
      cfg.ladder = parse_ladder(ladder);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kConfigError;
    }
  }
  return run(cfg, std::cout, std::cerr);
}

}  // namespace ldot::cli
