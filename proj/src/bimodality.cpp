#include "spontaneous/bimodality.hpp"

#include <cmath>
#include <limits>

#include "spontaneous/gamma_objective.hpp"

namespace spont {

void TwoComponentSpec::validate() const {
  if (nu.size() < 1 || !nu.allFinite()) throw InvalidInput("nu must be a finite nonempty vector");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw InvalidInput("sigma2 must be > 0");
  if (!(tau1 > 0.0 && tau1 < 1.0)) throw InvalidInput("tau1 must lie in (0, 1)");
  static_cast<void>(GammaIndex(gamma));
}

BimodalityVerdict check_bimodal(const TwoComponentSpec& spec) {
  spec.validate();
  const double g = spec.gamma;
  const double norm_nu = spec.nu.norm();
  BimodalityVerdict v;
  v.d = spec.nu.squaredNorm() - (spec.sigma2 + 1.0 / g);
  if (!(v.d > 0.0)) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    v.log_lhs_upper = v.log_rhs_upper = v.log_lhs_lower = v.log_rhs_lower = nan;
    return v;
  }
  const double root_d = std::sqrt(v.d);
  const double a = g / (1.0 + g * spec.sigma2);
  const double log_ratio = std::log(spec.tau1) - std::log(spec.tau2());
  v.log_lhs_upper = 2.0 * a * norm_nu * root_d;
  v.log_rhs_upper = std::log(a) + 2.0 * std::log(norm_nu + root_d) + log_ratio;
  v.log_lhs_lower = -2.0 * a * norm_nu * root_d;
  v.log_rhs_lower = std::log(a) + 2.0 * std::log(norm_nu - root_d) + log_ratio;
  v.bimodal = v.log_lhs_upper > v.log_rhs_upper && v.log_lhs_lower < v.log_rhs_lower;
  if (v.bimodal) v.displacement_bound = norm_nu - root_d;
  return v;
}

double oracle_resolution(const TwoComponentSpec& spec, int grid_n) {
  return 2.0 * kOracleReach * spec.nu.norm() / static_cast<double>(grid_n - 1);
}

double profile_scale(const TwoComponentSpec& spec) {
  spec.validate();
  return spec.nu.squaredNorm() * spec.gamma / (2.0 * (1.0 + spec.sigma2 * spec.gamma));
}

double profile_h(const TwoComponentSpec& spec, double t) {
  if (!(t > -1.0 && t < 1.0)) throw DomainError("profile h(t) is defined only on (-1, 1)");
  const double c = profile_scale(spec);
  return -4.0 * c * t + std::log1p(t) - std::log1p(-t) - std::log(spec.tau1 / spec.tau2());
}

double profile_h_derivative(const TwoComponentSpec& spec, double t) {
  if (!(t > -1.0 && t < 1.0)) throw DomainError("profile h'(t) is defined only on (-1, 1)");
  return -4.0 * profile_scale(spec) + 1.0 / (1.0 + t) + 1.0 / (1.0 - t);
}

std::optional<double> profile_critical_point(const TwoComponentSpec& spec) {
  const double two_c = 2.0 * profile_scale(spec);
  if (!(two_c > 1.0)) return std::nullopt;
  return std::sqrt(1.0 - 1.0 / two_c);
}

MixtureSpec to_mixture(const TwoComponentSpec& spec) {
  spec.validate();
  const auto p = spec.nu.size();
  const Matrix s = spec.sigma2 * Matrix::Identity(p, p);
  MixtureSpec g;
  g.components = {GaussianComponent(spec.nu, s), GaussianComponent(-spec.nu, s)};
  g.proportions = {spec.tau1, spec.tau2()};
  return g;
}

std::vector<double> oracle_modes(const TwoComponentSpec& spec, int grid_n) {
  if (grid_n < 3) throw InvalidInput("oracle grid needs at least 3 points");
  const MixtureSpec g = to_mixture(spec);
  const GammaIndex gamma(spec.gamma);
  const auto n = static_cast<std::size_t>(grid_n);
  std::vector<double> t(n), density(n);
  for (std::size_t j = 0; j < n; ++j) {
    t[j] = -kOracleReach + 2.0 * kOracleReach * static_cast<double>(j) / static_cast<double>(n - 1);
    density[j] = -gamma_cross_entropy_gaussian(g, t[j] * spec.nu, gamma);
  }
  std::vector<double> modes;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    if (density[j] > density[j - 1] && density[j] > density[j + 1]) modes.push_back(t[j]);
  }
  return modes;
}

int oracle_mode_count(const TwoComponentSpec& spec, int grid_n) {
  if (grid_n < 1000) throw InvalidInput("oracle_mode_count requires grid_n >= 1000");
  return static_cast<int>(oracle_modes(spec, grid_n).size());
}

}  // namespace spont
