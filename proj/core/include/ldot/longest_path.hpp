#pragma once

// Longest paths on dense graphs whose cycles are nonpositive. Internal helpers.

#include <cstddef>
#include <vector>

#include "ldot/matrix.hpp"

namespace ldot::detail {

/// Tolerance on a cycle weight before it counts as positive.
inline constexpr double kPositiveCycleTol = 1e-9;

/// Longest walk values from `source` with edge weights w(p,q). The source starts at 0.
/// Throws PositiveCycleError if relaxation still improves by more than the tolerance after
/// |V| rounds.
std::vector<double> longest_paths_from(const Matrix& w, std::size_t source);

/// Same, starting from arbitrary initial values (-infinity marks unreached nodes).
std::vector<double> longest_paths(const Matrix& w, std::vector<double> dist);

}  // namespace ldot::detail
