#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ldot/cost.hpp"
#include "ldot/coupling.hpp"
#include "ldot/matrix.hpp"
#include "ldot/measure.hpp"
#include "ldot/support.hpp"

namespace ldot {

/// Dual factors of a previous solve, used to start the next rung of an epsilon ladder.
struct WarmStart {
  std::vector<double> log_f;
  std::vector<double> log_g;
  double epsilon = 0.0;  ///< regularization the factors were computed at
};

struct SinkhornOptions {
  int max_iter = 100000;
  /// Stop once the L-infinity marginal residual of the reconstructed coupling is below tol.
  double tol = 1e-9;
  std::optional<WarmStart> warm_start;
  int threads = 1;

  /// Rebalance the gauges of weakly coupled blocks of the coupling. Plain Sinkhorn contracts
  /// the mass exchanged between such blocks at a rate proportional to that (tiny) mass.
  bool block_balance = true;
  /// A cell is "strong" when its mass is at least strong_ratio * min(mu_i, nu_j).
  double strong_ratio = 1e-3;
  int balance_every = 25;
  int max_blocks = 64;
};

/// Entropic optimal coupling in factorized form:
///   pi(i,j) = mu_i nu_j exp(log_f[i] + log_g[j] - c(i,j)/eps).
/// The gauge is fixed by sum_i mu_i log_f[i] = 0.
struct EntropicSolution {
  Coupling coupling;
  std::vector<double> log_f;
  std::vector<double> log_g;
  double epsilon = 0.0;
  double marginal_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  Matrix cost;

  /// log pi(i,j) from the factors; finite even where the stored mass underflows.
  double log_mass(std::size_t i, std::size_t j) const;
  /// log of the density dpi/dP at (i,j).
  double log_density(std::size_t i, std::size_t j) const;
  WarmStart warm_start() const { return {log_f, log_g, epsilon}; }
};

/// Log-domain iterative proportional fitting for min <c,pi> + eps H(pi | mu (x) nu).
/// Non-convergence within max_iter is reported through `converged`, not thrown.
EntropicSolution solve_entropic(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const Matrix& cost, double epsilon,
                                const SinkhornOptions& opts = {});
EntropicSolution solve_entropic(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const CostSpec& cost, double epsilon,
                                const SinkhornOptions& opts = {});

/// Cycle defect of the density along one k-tuple (x_i, y_i), with y_{k+1} = y_1:
///   sum log Z(x_i,y_i) - sum log Z(x_i,y_{i+1}) + (1/eps)[sum c(x_i,y_i) - sum c(x_i,y_{i+1})].
/// Zero for every tuple iff the coupling is (c,eps)-cyclically invariant.
double cycle_invariance_defect(const EntropicSolution& sol, const Matrix& cost,
                               std::span<const IndexPair> tuple);

/// Maximum cycle defect over n_samples uniformly drawn k-tuples of cells.
double invariance_residual(const EntropicSolution& sol, const Matrix& cost, int k, int n_samples,
                           std::uint64_t seed);

}  // namespace ldot
