#pragma once

#include <optional>
#include <vector>

#include "spontaneous/core.hpp"

namespace spont {

/// Two spherical components tau1 N(mu1, s2 I) + tau2 N(mu2, s2 I) described by
/// the half-difference nu = (mu1 - mu2) / 2, against an identity-covariance
/// model with power index gamma.
struct TwoComponentSpec {
  Vector nu;
  double sigma2 = 1.0;
  double tau1 = 0.5;
  double gamma = 1.0;

  void validate() const;
  double tau2() const noexcept { return 1.0 - tau1; }
};

/// Verdict of the closed-form two-minima conditions. The inequalities
///   (a) d = |nu|^2 - (sigma2 + 1/gamma) > 0
///   (b) exp( 2g|nu|sqrt(d)/(1+g s2)) > g/(1+g s2) (|nu| + sqrt(d))^2 tau1/tau2
///   (c) exp(-2g|nu|sqrt(d)/(1+g s2)) < g/(1+g s2) (|nu| - sqrt(d))^2 tau1/tau2
/// are stored as logarithms of each side; they are NaN when d <= 0.
struct BimodalityVerdict {
  bool bimodal = false;
  double d = 0.0;
  double log_lhs_upper = 0.0;  ///< (b) left side
  double log_rhs_upper = 0.0;  ///< (b) right side
  double log_lhs_lower = 0.0;  ///< (c) left side
  double log_rhs_lower = 0.0;  ///< (c) right side
  std::optional<double> displacement_bound;  ///< |nu| - sqrt(d), only when bimodal
};

BimodalityVerdict check_bimodal(const TwoComponentSpec& spec);

/// C = |nu|^2 gamma / (2 (1 + sigma2 gamma)).
double profile_scale(const TwoComponentSpec& spec);

/// h(t) = -4Ct + log(1+t) - log(1-t) - log(tau1/tau2) on (-1, 1). The cross
/// entropy restricted to t*nu increases exactly where h(t) > 0.
double profile_h(const TwoComponentSpec& spec, double t);

/// h'(t) = -4C + 1/(1+t) + 1/(1-t).
double profile_h_derivative(const TwoComponentSpec& spec, double t);

/// Positive root D = sqrt(1 - 1/(2C)) of h', present only when 2C > 1.
std::optional<double> profile_critical_point(const TwoComponentSpec& spec);

/// Half-width of the oracle grid in units of t. Minima close to +-nu need
/// grid points on both sides, so the grid reaches past the segment ends.
inline constexpr double kOracleReach = 1.25;

/// Positions t of strict local maxima of -C_gamma(t nu) found on grid_n
/// uniform points of [-kOracleReach, kOracleReach], using the closed-form
/// mixture cross entropy. Independent of check_bimodal.
std::vector<double> oracle_modes(const TwoComponentSpec& spec, int grid_n);

/// Distance between neighbouring oracle grid points along nu.
double oracle_resolution(const TwoComponentSpec& spec, int grid_n);

/// Number of entries returned by oracle_modes(). Requires grid_n >= 1000.
int oracle_mode_count(const TwoComponentSpec& spec, int grid_n = 4000);

/// The two-component spec as a spherical MixtureSpec centred at the origin
/// with component means +nu and -nu.
MixtureSpec to_mixture(const TwoComponentSpec& spec);

}  // namespace spont
