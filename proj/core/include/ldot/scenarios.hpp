#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ldot/cost.hpp"
#include "ldot/matrix.hpp"
#include "ldot/measure.hpp"
#include "ldot/support.hpp"

namespace ldot {

enum class ScenarioKind { gaussian1d, assignment2x2, notwist, semidiscrete, random_monotone };

std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(std::string_view name);

/// key=value parameters of a generator. List values are separated by ';'.
using ScenarioParams = std::map<std::string, std::string>;

struct ScenarioSpec {
  ScenarioKind kind;
  ScenarioParams params;
};

/// Parses "kind" or "kind:key=value,key=value".
ScenarioSpec parse_scenario_spec(std::string_view text);

/// Facts a generator claims about its instance. Tests recompute them and compare.
struct KnownFacts {
  std::optional<SupportSet> gamma;
  /// Human-readable form of the rate function, empty if none is known.
  std::string rate_closed_form;
  /// The rate function as a function of atom coordinates, empty if none is known.
  std::function<double(double, double)> rate;
  std::optional<double> cost_gap_slope;
  std::optional<double> monge_slope;
  /// Coefficient a of the conditional profile exp(-a |y - T(x)|^2 / eps).
  std::optional<double> exponent_alpha;
  std::optional<double> off_diagonal_rate;
};

struct Scenario {
  std::string name;
  ScenarioKind kind;
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  CostSpec cost;
  KnownFacts facts;
  /// Grid spacing of a discretized continuous marginal, 0 for genuinely discrete instances.
  double grid_spacing = 0.0;

  Matrix cost_table() const;
};

/// Deterministic in (kind, params, seed). Throws InvalidArgument on bad or unknown params.
///
///   gaussian1d       n=401 a=1 b=2 L=8*max(a,b)
///   assignment2x2    c12=1 c21=2
///   notwist          n=101
///   semidiscrete     n=50 k=3, or atoms=0.2;0.7 [weights=1;2]
///   random_monotone  n=6 m=n integer_weights=0
Scenario make_scenario(ScenarioKind kind, const ScenarioParams& params = {}, std::uint64_t seed = 0);
Scenario make_scenario(const ScenarioSpec& spec, std::uint64_t seed = 0);

}  // namespace ldot
