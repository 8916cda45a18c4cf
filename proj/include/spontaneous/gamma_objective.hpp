#pragma once

#include "spontaneous/core.hpp"

namespace spont {

/// A gamma-loss value with constant terms omitted.
struct LossValue {
  double value = 0.0;
};

/// Identity-covariance gamma-loss with the 1/n normalization:
///   -(1/n) sum_i exp(-(gamma/2) |x_i - mu|^2),  always in [-1, 0).
LossValue loss_mu(const DataSet& data, const Vector& mu, GammaIndex gamma);

/// Gradient of loss_mu with respect to mu:
///   -(gamma/n) sum_i exp(-(gamma/2) |x_i - mu|^2) (x_i - mu).
Vector loss_mu_gradient(const DataSet& data, const Vector& mu, GammaIndex gamma);

/// Full Gaussian gamma-loss without the 1/n normalization:
///   -det(Sigma)^{-gamma/(2(1+gamma))} sum_i exp(-(gamma/2) q_i).
/// The two forms differ by a positive factor and share their minimizers.
LossValue loss_mu_sigma(const DataSet& data, const GaussianComponent& c, GammaIndex gamma);

/// Normalized weights w_i proportional to exp(-(gamma/2) q_i), computed with
/// the largest exponent subtracted first.
Vector weights(const DataSet& data, const GaussianComponent& c, GammaIndex gamma);

/// Same as weights() with a precomputed factorization of c.sigma().
Vector weights(const DataSet& data, const Vector& mu, const CovarianceFactor& f,
               GammaIndex gamma);

/// Population gamma-cross entropy of a spherical mixture g against the
/// identity-covariance model at mu, in closed form:
///   -sum_k tau_k phi(mu; mu_k, (sigma_k^2 + 1/gamma) I).
/// Throws NonSphericalComponent unless every covariance is sigma^2 I.
double gamma_cross_entropy_gaussian(const MixtureSpec& g, const Vector& mu, GammaIndex gamma);

/// Normalizing constant (int phi^{1+gamma})^{-gamma/(1+gamma)} of a Gaussian.
double kappa(const GaussianComponent& c, GammaIndex gamma);
double log_kappa(const GaussianComponent& c, GammaIndex gamma);

/// Sample gamma-cross entropy -kappa (1/n) sum_i phi(x_i; c)^gamma.
///
/// The gamma-divergence between the sampling density g and the model equals
/// this value minus H_gamma(g). H_gamma(g) does not depend on the model, so
/// minimizers agree; it is not estimable from a sample and is only available
/// for known mixtures through gamma_entropy().
double gamma_divergence(const DataSet& sample, const GaussianComponent& c, GammaIndex gamma);

/// Mean negative log density, the gamma -> 0 limit of
/// (gamma_divergence + 1) / gamma.
double mean_negative_log_density(const DataSet& sample, const GaussianComponent& c);

/// Population gamma-entropy H_gamma(g) = -(int g^{1+gamma})^{1/(1+gamma)} by
/// quadrature. Only p <= 2 is supported; throws InvalidInput otherwise.
double gamma_entropy(const MixtureSpec& g, GammaIndex gamma, int nodes_per_axis = 801);

/// Population gamma-cross entropy -kappa(theta) int g phi(.;theta)^gamma by
/// quadrature, p <= 2.
double population_gamma_cross_entropy(const MixtureSpec& g, const GaussianComponent& c,
                                      GammaIndex gamma, int nodes_per_axis = 801);

/// Population gamma-divergence C_gamma(g, f) - H_gamma(g) (nonnegative), p <= 2.
double population_gamma_divergence(const MixtureSpec& g, const GaussianComponent& c,
                                   GammaIndex gamma, int nodes_per_axis = 801);

/// Mixture density sum_k tau_k phi(x; mu_k, Sigma_k).
double mixture_density(const MixtureSpec& g, const Vector& x);

}  // namespace spont
