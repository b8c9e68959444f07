#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "ldot/matrix.hpp"
#include "ldot/measure.hpp"

namespace ldot {

enum class CostKind {
  quadratic,  ///< c(x,y) = |x - y|^2
  notwist,    ///< c(x,y) = (y - x)^2 for y >= x, 0 otherwise (1-D only)
  matrix,     ///< explicit n x m table indexed by atom positions
};

std::string_view to_string(CostKind kind);
CostKind parse_cost_kind(std::string_view name);

class CostSpec {
 public:
  static CostSpec quadratic() { return CostSpec(CostKind::quadratic); }
  static CostSpec notwist() { return CostSpec(CostKind::notwist); }
  /// Entries must be finite and nonnegative.
  static CostSpec matrix(Matrix table);

  CostKind kind() const noexcept { return kind_; }
  const Matrix& table() const noexcept { return table_; }

 private:
  explicit CostSpec(CostKind kind) : kind_(kind) {}

  CostKind kind_;
  Matrix table_;
};

/// Cost between two points for the geometric kinds.
double eval_cost(const CostSpec& spec, std::span<const double> x, std::span<const double> y);

/// Cost between atom i of the first marginal and atom j of the second (matrix kind).
double eval_cost(const CostSpec& spec, std::size_t i, std::size_t j);

/// Dense cost table c(x_i, y_j) over the atoms of mu and nu.
Matrix cost_matrix(const CostSpec& spec, const DiscreteMeasure& mu, const DiscreteMeasure& nu);

}  // namespace ldot
