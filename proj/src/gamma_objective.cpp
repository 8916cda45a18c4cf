#include "spontaneous/gamma_objective.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace spont {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

// Trapezoid rule over a box covering every component of g to +-10 sd.
double integrate_over_mixture_box(const MixtureSpec& g, int nodes,
                                  const std::function<double(const Vector&)>& f) {
  const auto p = g.dim();
  if (p > 2) throw InvalidInput("quadrature is only available for p <= 2");
  if (nodes < 3) throw InvalidInput("quadrature needs at least 3 nodes per axis");
  Vector lo = Vector::Constant(p, std::numeric_limits<double>::infinity());
  Vector hi = -lo;
  for (const auto& c : g.components) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(c.sigma(), Eigen::EigenvaluesOnly);
    const double sd = std::sqrt(es.eigenvalues().maxCoeff());
    lo = lo.cwiseMin((c.mu().array() - 10.0 * sd).matrix());
    hi = hi.cwiseMax((c.mu().array() + 10.0 * sd).matrix());
  }
  const Vector h = (hi - lo) / static_cast<double>(nodes - 1);
  auto wt = [nodes](int i) { return (i == 0 || i == nodes - 1) ? 0.5 : 1.0; };

  double total = 0.0;
  Vector x(p);
  if (p == 1) {
    for (int i = 0; i < nodes; ++i) {
      x(0) = lo(0) + i * h(0);
      total += wt(i) * f(x);
    }
    return total * h(0);
  }
  for (int i = 0; i < nodes; ++i) {
    x(0) = lo(0) + i * h(0);
    for (int j = 0; j < nodes; ++j) {
      x(1) = lo(1) + j * h(1);
      total += wt(i) * wt(j) * f(x);
    }
  }
  return total * h(0) * h(1);
}

double mixture_density_factored(const MixtureSpec& g, const std::vector<CovarianceFactor>& fs,
                                const Vector& x) {
  double s = 0.0;
  for (std::size_t k = 0; k < g.components.size(); ++k) {
    s += g.proportions[k] * std::exp(log_normal_density(x, g.components[k].mu(), fs[k]));
  }
  return s;
}

std::vector<CovarianceFactor> factor_all(const MixtureSpec& g) {
  std::vector<CovarianceFactor> fs;
  fs.reserve(g.components.size());
  for (const auto& c : g.components) fs.emplace_back(c.sigma());
  return fs;
}

}  // namespace

LossValue loss_mu(const DataSet& data, const Vector& mu, GammaIndex gamma) {
  require_same_dim(data, mu.size(), "mu");
  const Vector sq = (data.x().rowwise() - mu.transpose()).rowwise().squaredNorm();
  const double s = (-0.5 * gamma.value() * sq.array()).exp().sum();
  return {-s / static_cast<double>(data.n())};
}

Vector loss_mu_gradient(const DataSet& data, const Vector& mu, GammaIndex gamma) {
  require_same_dim(data, mu.size(), "mu");
  const Matrix dev = data.x().rowwise() - mu.transpose();
  const Vector e = (-0.5 * gamma.value() * dev.rowwise().squaredNorm().array()).exp();
  return -(gamma.value() / static_cast<double>(data.n())) * (dev.transpose() * e);
}

LossValue loss_mu_sigma(const DataSet& data, const GaussianComponent& c, GammaIndex gamma) {
  require_same_dim(data, c.dim(), "component");
  const CovarianceFactor f(c.sigma());
  const double g = gamma.value();
  const Vector q = f.quad_rows(data.x(), c.mu());
  const double s = (-0.5 * g * q.array()).exp().sum();
  const double det_factor = std::exp(-g / (2.0 * (1.0 + g)) * f.log_det());
  return {-det_factor * s};
}

Vector weights(const DataSet& data, const Vector& mu, const CovarianceFactor& f,
               GammaIndex gamma) {
  require_same_dim(data, mu.size(), "mu");
  Vector a = -0.5 * gamma.value() * f.quad_rows(data.x(), mu);
  a.array() -= a.maxCoeff();
  a = a.array().exp();
  return a / a.sum();
}

Vector weights(const DataSet& data, const GaussianComponent& c, GammaIndex gamma) {
  return weights(data, c.mu(), CovarianceFactor(c.sigma()), gamma);
}

double gamma_cross_entropy_gaussian(const MixtureSpec& g, const Vector& mu, GammaIndex gamma) {
  g.validate();
  const auto p = g.dim();
  if (mu.size() != p) throw InvalidInput("mu and mixture differ in dimension");
  double total = 0.0;
  for (std::size_t k = 0; k < g.components.size(); ++k) {
    const Matrix& s = g.components[k].sigma();
    const double s2 = s(0, 0);
    double spread = 0.0;
    for (Eigen::Index r = 0; r < p; ++r) {
      for (Eigen::Index c = 0; c < p; ++c) {
        spread = std::max(spread, std::abs(s(r, c) - (r == c ? s2 : 0.0)));
      }
    }
    if (spread > kTolerances.spherical) {
      throw NonSphericalComponent("mixture component is not a multiple of the identity");
    }
    const double v = s2 + 1.0 / gamma.value();
    const double r2 = (mu - g.components[k].mu()).squaredNorm();
    const double log_phi = -0.5 * (static_cast<double>(p) * (kLog2Pi + std::log(v)) + r2 / v);
    total += g.proportions[k] * std::exp(log_phi);
  }
  return -total;
}

double log_kappa(const GaussianComponent& c, GammaIndex gamma) {
  const double g = gamma.value();
  const double p = static_cast<double>(c.dim());
  const CovarianceFactor f(c.sigma());
  const double inner = 0.5 * p * std::log1p(g) + 0.5 * g * p * kLog2Pi + 0.5 * g * f.log_det();
  return g / (1.0 + g) * inner;
}

double kappa(const GaussianComponent& c, GammaIndex gamma) {
  return std::exp(log_kappa(c, gamma));
}

double gamma_divergence(const DataSet& sample, const GaussianComponent& c, GammaIndex gamma) {
  require_same_dim(sample, c.dim(), "component");
  const double g = gamma.value();
  const CovarianceFactor f(c.sigma());
  const double p = static_cast<double>(c.dim());
  const Vector q = f.quad_rows(sample.x(), c.mu());
  const Vector log_phi = (-0.5 * (p * kLog2Pi + f.log_det() + q.array())).matrix();
  const double mean_pow = (g * log_phi.array()).exp().mean();
  return -std::exp(log_kappa(c, gamma)) * mean_pow;
}

double mean_negative_log_density(const DataSet& sample, const GaussianComponent& c) {
  require_same_dim(sample, c.dim(), "component");
  const CovarianceFactor f(c.sigma());
  const double p = static_cast<double>(c.dim());
  const Vector q = f.quad_rows(sample.x(), c.mu());
  return (0.5 * (p * kLog2Pi + f.log_det() + q.array())).mean();
}

double mixture_density(const MixtureSpec& g, const Vector& x) {
  return mixture_density_factored(g, factor_all(g), x);
}

double gamma_entropy(const MixtureSpec& g, GammaIndex gamma, int nodes_per_axis) {
  g.validate();
  const auto fs = factor_all(g);
  const double e = 1.0 + gamma.value();
  const double integral = integrate_over_mixture_box(g, nodes_per_axis, [&](const Vector& x) {
    return std::pow(mixture_density_factored(g, fs, x), e);
  });
  return -std::pow(integral, 1.0 / e);
}

double population_gamma_cross_entropy(const MixtureSpec& g, const GaussianComponent& c,
                                      GammaIndex gamma, int nodes_per_axis) {
  g.validate();
  if (c.dim() != g.dim()) throw InvalidInput("component and mixture differ in dimension");
  const auto fs = factor_all(g);
  const CovarianceFactor fc(c.sigma());
  const double gv = gamma.value();
  const double integral = integrate_over_mixture_box(g, nodes_per_axis, [&](const Vector& x) {
    return mixture_density_factored(g, fs, x) * std::exp(gv * log_normal_density(x, c.mu(), fc));
  });
  return -std::exp(log_kappa(c, gamma)) * integral;
}

double population_gamma_divergence(const MixtureSpec& g, const GaussianComponent& c,
                                   GammaIndex gamma, int nodes_per_axis) {
  return population_gamma_cross_entropy(g, c, gamma, nodes_per_axis) -
         gamma_entropy(g, gamma, nodes_per_axis);
}

}  // namespace spont
