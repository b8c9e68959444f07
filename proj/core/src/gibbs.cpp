#include "ldot/gibbs.hpp"

#include <cmath>
#include <limits>

#include "ldot/errors.hpp"

namespace ldot {

GibbsReference gibbs_reference(const Matrix& cost, const DiscreteMeasure& mu,
                               const DiscreteMeasure& nu, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw InvalidArgument("gibbs_reference: epsilon must be positive");
  if (cost.rows() != static_cast<Eigen::Index>(mu.size()) ||
      cost.cols() != static_cast<Eigen::Index>(nu.size()))
    throw InvalidArgument("gibbs_reference: cost shape does not match marginals");

  // log of integral of exp(-c/eps) dP, by log-sum-exp over log(mu_i nu_j) - c_ij/eps.
  double top = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < cost.rows(); ++i)
    for (Eigen::Index j = 0; j < cost.cols(); ++j)
      top = std::max(top, std::log(mu.weight(i)) + std::log(nu.weight(j)) - cost(i, j) / epsilon);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < cost.rows(); ++i)
    for (Eigen::Index j = 0; j < cost.cols(); ++j)
      acc += std::exp(std::log(mu.weight(i)) + std::log(nu.weight(j)) - cost(i, j) / epsilon - top);

  GibbsReference r;
  r.epsilon = epsilon;
  r.log_alpha = -(top + std::log(acc));
  r.log_density = (r.log_alpha - cost.array() / epsilon).matrix();
  return r;
}

GibbsReference gibbs_reference(const CostSpec& cost, const DiscreteMeasure& mu,
                               const DiscreteMeasure& nu, double epsilon) {
  return gibbs_reference(cost_matrix(cost, mu, nu), mu, nu, epsilon);
}

}  // namespace ldot
