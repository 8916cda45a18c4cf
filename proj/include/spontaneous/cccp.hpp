#pragma once

#include <vector>

#include "spontaneous/core.hpp"
#include "spontaneous/gamma_objective.hpp"

namespace spont {

struct IterationConfig {
  double epsilon = 1e-8;  ///< stop once |dmu| + |dSigma|_F < epsilon
  int max_iter = 500;
  double ridge = 1e-9;  ///< relative diagonal repair for collapsing covariances

  void validate() const;
};

enum class UpdateMode { mu_only, sigma_only, joint };

struct FixedPointResult {
  GaussianComponent component;
  int iterations = 0;
  bool converged = false;
  bool ridge_repaired = false;  ///< the final covariance needed diagonal repair
  std::vector<LossValue> loss_trace;  ///< initial loss followed by one entry per step
};

/// One fixed-point step. Weights are evaluated at the current (mu, Sigma);
/// the covariance update uses deviations from the new mean:
///   mu'    = sum_i w_i x_i
///   Sigma' = (1 + gamma) sum_i w_i (x_i - mu')(x_i - mu')^T
/// A covariance whose smallest eigenvalue falls below ridge * tr/p gets
/// ridge * tr/p added to its diagonal (ridge itself when the trace is zero).
GaussianComponent update_step(const DataSet& data, const GaussianComponent& current,
                              GammaIndex gamma, bool update_mu, bool update_sigma,
                              double ridge = IterationConfig{}.ridge,
                              bool* ridge_repaired = nullptr);

/// Iterates update_step from `init` until the step change drops below
/// cfg.epsilon, cfg.max_iter steps have run, or a step needed ridge repair
/// (a collapsing covariance; reported through ridge_repaired).
///
/// The loss trace records the objective each mode actually decreases: the
/// 1/n-normalized kernel loss with Sigma held at init.sigma() for mu_only
/// (equal to loss_mu when that is the identity), and loss_mu_sigma otherwise.
/// SingularCovariance raised mid-iteration carries the iteration index.
FixedPointResult find_local_min(const DataSet& data, const GaussianComponent& init,
                                GammaIndex gamma, const IterationConfig& cfg, UpdateMode mode);

/// Loss recorded for a mu_only run: -(1/n) sum_i exp(-(gamma/2) q_i) with the
/// quadratic form taken in c.sigma().
LossValue mean_kernel_loss(const DataSet& data, const GaussianComponent& c, GammaIndex gamma);

}  // namespace spont
