#pragma once

#include "ldot/cost.hpp"
#include "ldot/matrix.hpp"
#include "ldot/measure.hpp"

namespace ldot {

/// Gibbs reference R with dR/dP = alpha * exp(-c/eps), P = mu (x) nu.
struct GibbsReference {
  double epsilon = 0.0;
  Matrix log_density;  ///< log(dR/dP)(i,j) = log_alpha - c(i,j)/eps
  double log_alpha = 0.0;
};

/// log_alpha is computed by log-sum-exp so that large c/eps does not overflow.
GibbsReference gibbs_reference(const Matrix& cost, const DiscreteMeasure& mu,
                               const DiscreteMeasure& nu, double epsilon);
GibbsReference gibbs_reference(const CostSpec& cost, const DiscreteMeasure& mu,
                               const DiscreteMeasure& nu, double epsilon);

}  // namespace ldot
