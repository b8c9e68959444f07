#pragma once

#include <utility>

#include "ldot/matrix.hpp"
#include "ldot/measure.hpp"

namespace ldot {

/// Nonnegative n x m mass table whose row and column sums reproduce two marginals.
class Coupling {
 public:
  /// Default tolerance on marginal deviations, relative to the largest atom weight.
  static constexpr double kMarginalRelTol = 1e-8;
  static constexpr double kTotalMassTol = 1e-12;

  /// Validates shape, nonnegativity, total mass and marginals. `marginal_abs_tol`, when
  /// positive, widens the marginal check for solvers that stop at a looser residual.
  Coupling(Matrix mass, DiscreteMeasure mu, DiscreteMeasure nu, double marginal_abs_tol = 0.0);

  /// Skips marginal validation; used to report the state of a solver that did not converge.
  static Coupling unchecked(Matrix mass, DiscreteMeasure mu, DiscreteMeasure nu);

  /// Independent coupling mu (x) nu.
  static Coupling product(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

  const Matrix& mass() const noexcept { return mass_; }
  double mass(std::size_t i, std::size_t j) const {
    return mass_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const DiscreteMeasure& mu() const noexcept { return mu_; }
  const DiscreteMeasure& nu() const noexcept { return nu_; }
  std::size_t rows() const noexcept { return mu_.size(); }
  std::size_t cols() const noexcept { return nu_.size(); }

  /// Largest absolute deviation of a row or column sum from its marginal weight.
  double marginal_residual() const;

 private:
  Coupling() = default;

  Matrix mass_;
  DiscreteMeasure mu_;
  DiscreteMeasure nu_;
};

/// Row-sum and column-sum measures on the atoms of the reference marginals.
std::pair<DiscreteMeasure, DiscreteMeasure> marginals(const Coupling& coupling);

/// H(pi | ref) = sum pi log(pi / ref) with 0 log 0 = 0; +infinity when pi charges a ref-null cell.
double relative_entropy(const Matrix& pi, const Matrix& ref);
double relative_entropy(const Coupling& pi, const Coupling& ref);

/// Integral of the cost table against the coupling, summed in row-major order.
double transport_cost(const Coupling& coupling, const Matrix& cost);

}  // namespace ldot
