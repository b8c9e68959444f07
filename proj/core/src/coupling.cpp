#include "ldot/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ldot/errors.hpp"

namespace ldot {

namespace {

std::vector<std::vector<double>> points_of(const DiscreteMeasure& m) {
  std::vector<std::vector<double>> pts;
  pts.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto p = m.point(i);
    pts.emplace_back(p.begin(), p.end());
  }
  return pts;
}

double max_weight(const DiscreteMeasure& m) {
  return *std::max_element(m.weights().begin(), m.weights().end());
}

}  // namespace

Coupling::Coupling(Matrix mass, DiscreteMeasure mu, DiscreteMeasure nu, double marginal_abs_tol)
    : mass_(std::move(mass)), mu_(std::move(mu)), nu_(std::move(nu)) {
  if (mass_.rows() != static_cast<Eigen::Index>(mu_.size()) ||
      mass_.cols() != static_cast<Eigen::Index>(nu_.size()))
    throw InvalidArgument("coupling shape " + std::to_string(mass_.rows()) + "x" +
                          std::to_string(mass_.cols()) + " does not match marginals " +
                          std::to_string(mu_.size()) + "x" + std::to_string(nu_.size()));
  for (Eigen::Index k = 0; k < mass_.size(); ++k) {
    const double v = mass_.data()[k];
    if (!std::isfinite(v) || v < 0.0)
      throw InvalidArgument("coupling has a negative or non-finite entry");
  }
  // Per-atom marginal errors of size marginal_abs_tol add up in the total.
  const double mass_tol = std::max(
      kTotalMassTol, marginal_abs_tol * static_cast<double>(std::min(mu_.size(), nu_.size())));
  if (std::abs(mass_.sum() - 1.0) > mass_tol)
    throw InvalidArgument("coupling total mass " + std::to_string(mass_.sum()) + " is not 1");
  const double tol = std::max(
      kMarginalRelTol * std::max(max_weight(mu_), max_weight(nu_)), marginal_abs_tol);
  const double res = marginal_residual();
  if (res > tol)
    throw InvalidArgument("coupling marginal residual " + std::to_string(res) +
                          " exceeds tolerance " + std::to_string(tol));
}

Coupling Coupling::unchecked(Matrix mass, DiscreteMeasure mu, DiscreteMeasure nu) {
  Coupling c;
  c.mass_ = std::move(mass);
  c.mu_ = std::move(mu);
  c.nu_ = std::move(nu);
  return c;
}

Coupling Coupling::product(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  Matrix p(mu.size(), nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j)
      p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = mu.weight(i) * nu.weight(j);
  return Coupling(std::move(p), mu, nu);
}

double Coupling::marginal_residual() const {
  double res = 0.0;
  for (std::size_t i = 0; i < mu_.size(); ++i)
    res = std::max(res, std::abs(mass_.row(static_cast<Eigen::Index>(i)).sum() - mu_.weight(i)));
  for (std::size_t j = 0; j < nu_.size(); ++j)
    res = std::max(res, std::abs(mass_.col(static_cast<Eigen::Index>(j)).sum() - nu_.weight(j)));
  return res;
}

std::pair<DiscreteMeasure, DiscreteMeasure> marginals(const Coupling& coupling) {
  const Matrix& m = coupling.mass();
  std::vector<double> row(coupling.rows()), col(coupling.cols());
  for (std::size_t i = 0; i < row.size(); ++i) row[i] = m.row(static_cast<Eigen::Index>(i)).sum();
  for (std::size_t j = 0; j < col.size(); ++j) col[j] = m.col(static_cast<Eigen::Index>(j)).sum();
  return {build_measure(points_of(coupling.mu()), row),
          build_measure(points_of(coupling.nu()), col)};
}

double relative_entropy(const Matrix& pi, const Matrix& ref) {
  if (pi.rows() != ref.rows() || pi.cols() != ref.cols())
    throw InvalidArgument("relative_entropy: shape mismatch");
  double h = 0.0;
  for (Eigen::Index k = 0; k < pi.size(); ++k) {
    const double p = pi.data()[k];
    if (p <= 0.0) continue;
    const double r = ref.data()[k];
    if (r <= 0.0) return std::numeric_limits<double>::infinity();
    h += p * std::log(p / r);
  }
  return h;
}

double relative_entropy(const Coupling& pi, const Coupling& ref) {
  return relative_entropy(pi.mass(), ref.mass());
}

double transport_cost(const Coupling& coupling, const Matrix& cost) {
  if (cost.rows() != coupling.mass().rows() || cost.cols() != coupling.mass().cols())
    throw InvalidArgument("transport_cost: shape mismatch");
  double s = 0.0;
  for (Eigen::Index k = 0; k < cost.size(); ++k) s += cost.data()[k] * coupling.mass().data()[k];
  return s;
}

}  // namespace ldot
