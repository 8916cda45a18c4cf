#include "spontaneous/cccp.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <optional>

namespace spont {

namespace {

Vector softmax_weights(const Vector& q, double gamma) {
  Vector a = -0.5 * gamma * q;
  a.array() -= a.maxCoeff();
  a = a.array().exp();
  return a / a.sum();
}

Matrix repair(Matrix s, double ridge, bool& repaired) {
  s = 0.5 * (s + s.transpose());
  const double p = static_cast<double>(s.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  const double trace = s.trace();
  double floor = ridge * trace / p;
  if (!(floor > 0.0)) floor = ridge;
  if (es.eigenvalues().minCoeff() < floor) {
    s.diagonal().array() += floor;
    repaired = true;
  }
  return s;
}

struct Step {
  Vector mu;
  Matrix sigma;
  bool repaired = false;
};

Step step_from_weights(const DataSet& data, const Vector& mu, const Matrix& sigma,
                       const Vector& w, double gamma, bool update_mu, bool update_sigma,
                       double ridge) {
  Step out{mu, sigma, false};
  if (update_mu) out.mu = data.x().transpose() * w;
  if (update_sigma) {
    const Matrix dev = data.x().rowwise() - out.mu.transpose();
    Matrix s = (1.0 + gamma) * (dev.transpose() * w.asDiagonal() * dev);
    out.sigma = repair(std::move(s), ridge, out.repaired);
  }
  return out;
}

double kernel_sum(const Vector& q, double gamma) {
  return (-0.5 * gamma * q.array()).exp().sum();
}

}  // namespace

void IterationConfig::validate() const {
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be > 0");
  if (max_iter < 1) throw InvalidInput("max_iter must be >= 1");
  if (!(ridge >= 0.0)) throw InvalidInput("ridge must be >= 0");
}

GaussianComponent update_step(const DataSet& data, const GaussianComponent& current,
                              GammaIndex gamma, bool update_mu, bool update_sigma, double ridge,
                              bool* ridge_repaired) {
  if (!update_mu && !update_sigma) {
    throw InvalidInput("update_step needs at least one of mu or sigma to update");
  }
  require_same_dim(data, current.dim(), "component");
  const CovarianceFactor f(current.sigma());
  const Vector w = softmax_weights(f.quad_rows(data.x(), current.mu()), gamma.value());
  Step s = step_from_weights(data, current.mu(), current.sigma(), w, gamma.value(), update_mu,
                             update_sigma, ridge);
  if (ridge_repaired) *ridge_repaired = s.repaired;
  // Validates positive definiteness and conditioning of the new covariance.
  GaussianComponent next(std::move(s.mu), std::move(s.sigma));
  if (update_sigma) static_cast<void>(CovarianceFactor(next.sigma()));
  return next;
}

LossValue mean_kernel_loss(const DataSet& data, const GaussianComponent& c, GammaIndex gamma) {
  require_same_dim(data, c.dim(), "component");
  const CovarianceFactor f(c.sigma());
  return {-kernel_sum(f.quad_rows(data.x(), c.mu()), gamma.value()) /
          static_cast<double>(data.n())};
}

FixedPointResult find_local_min(const DataSet& data, const GaussianComponent& init,
                                GammaIndex gamma, const IterationConfig& cfg, UpdateMode mode) {
  cfg.validate();
  require_same_dim(data, init.dim(), "initial component");
  const double g = gamma.value();
  const bool update_mu = mode != UpdateMode::sigma_only;
  const bool update_sigma = mode != UpdateMode::mu_only;
  const double n = static_cast<double>(data.n());

  Vector mu = init.mu();
  Matrix sigma = init.sigma();
  std::optional<CovarianceFactor> f;
  f.emplace(sigma);

  auto loss_of = [&](const Vector& q) {
    if (mode == UpdateMode::mu_only) return LossValue{-kernel_sum(q, g) / n};
    return LossValue{-std::exp(-g / (2.0 * (1.0 + g)) * f->log_det()) * kernel_sum(q, g)};
  };

  Vector q = f->quad_rows(data.x(), mu);
  FixedPointResult result{init, 0, false, false, {}};
  result.loss_trace.reserve(static_cast<std::size_t>(cfg.max_iter) + 1);
  result.loss_trace.push_back(loss_of(q));

  for (int t = 1; t <= cfg.max_iter; ++t) {
    const Vector w = softmax_weights(q, g);
    Step s = step_from_weights(data, mu, sigma, w, g, update_mu, update_sigma, cfg.ridge);
    const double change = (s.mu - mu).norm() + (s.sigma - sigma).norm();
    try {
      if (update_sigma) f.emplace(s.sigma);
    } catch (const SingularCovariance& e) {
      throw SingularCovariance(e.what(), static_cast<std::size_t>(t));
    }
    mu = std::move(s.mu);
    sigma = std::move(s.sigma);
    result.ridge_repaired = s.repaired;
    q = f->quad_rows(data.x(), mu);
    result.loss_trace.push_back(loss_of(q));
    result.iterations = t;
    if (change < cfg.epsilon) {
      result.converged = true;
      break;
    }
    // A repaired covariance means the scatter collapsed: the loss is unbounded
    // below along that direction and later steps would only chase the floor.
    if (s.repaired) break;
  }
  try {
    result.component = GaussianComponent(std::move(mu), std::move(sigma));
  } catch (const SingularCovariance& e) {
    throw SingularCovariance(e.what(), static_cast<std::size_t>(result.iterations));
  }
  return result;
}

}  // namespace spont
