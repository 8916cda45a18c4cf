#include "spontaneous/core.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

namespace spont {

DataSet::DataSet(Matrix x, std::vector<std::string> feature_names)
    : x_(std::move(x)), names_(std::move(feature_names)) {
  if (x_.rows() < 1 || x_.cols() < 1) {
    throw InvalidInput("data set must have at least one row and one column");
  }
  if (!x_.allFinite()) {
    throw InvalidInput("data set contains non-finite entries");
  }
  if (!names_.empty() && static_cast<Eigen::Index>(names_.size()) != x_.cols()) {
    throw InvalidInput("feature name count does not match column count");
  }
}

GammaIndex::GammaIndex(double value) : value_(value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << "power index must be finite and > 0, got " << value;
    throw InvalidInput(os.str());
  }
}

GaussianComponent::GaussianComponent(Vector mu, Matrix sigma)
    : mu_(std::move(mu)), sigma_(std::move(sigma)) {
  const auto p = mu_.size();
  if (p < 1) throw InvalidInput("component mean must be non-empty");
  if (sigma_.rows() != p || sigma_.cols() != p) {
    throw InvalidInput("covariance shape does not match mean dimension");
  }
  if (!mu_.allFinite() || !sigma_.allFinite()) {
    throw InvalidInput("component has non-finite entries");
  }
  if ((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > kTolerances.symmetry) {
    throw InvalidInput("covariance is not symmetric");
  }
  Eigen::LLT<Matrix> llt(sigma_);
  if (llt.info() != Eigen::Success) {
    throw SingularCovariance("covariance is not positive definite");
  }
}

GaussianComponent GaussianComponent::identity(Vector mu) {
  const auto p = mu.size();
  return GaussianComponent(std::move(mu), Matrix::Identity(p, p));
}

CovarianceFactor::CovarianceFactor(const Matrix& sigma) : llt_(sigma), dim_(sigma.rows()) {
  if (llt_.info() != Eigen::Success) {
    throw SingularCovariance("covariance factorization failed");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kTolerances.max_condition) {
    std::ostringstream os;
    os << "covariance is ill-conditioned (eigenvalues " << lo << " .. " << hi << ")";
    throw SingularCovariance(os.str());
  }
  log_det_ = 2.0 * llt_.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

double CovarianceFactor::quad(const Vector& d) const {
  return llt_.matrixL().solve(d).squaredNorm();
}

Vector CovarianceFactor::quad_rows(const Matrix& x, const Vector& mu) const {
  Matrix dev = (x.rowwise() - mu.transpose()).transpose();  // p x n
  llt_.matrixL().solveInPlace(dev);
  return dev.colwise().squaredNorm().transpose();
}

void MixtureSpec::validate() const {
  if (components.empty()) throw InvalidInput("mixture has no components");
  if (proportions.size() != components.size()) {
    throw InvalidInput("mixture proportions and components differ in length");
  }
  double total = 0.0;
  for (double t : proportions) {
    if (!(t > 0.0)) throw InvalidInput("mixture proportions must be > 0");
    total += t;
  }
  if (std::abs(total - 1.0) > kTolerances.proportion_sum) {
    throw InvalidInput("mixture proportions must sum to 1");
  }
  for (const auto& c : components) {
    if (c.dim() != dim()) throw InvalidInput("mixture components differ in dimension");
  }
}

void ClusterModel::validate() const {
  if (components.empty()) throw InvalidInput("cluster model has no components");
  for (const auto& c : components) {
    if (c.dim() != components.front().dim()) {
      throw InvalidInput("cluster components differ in dimension");
    }
  }
  if (!has_proportions()) return;
  if (proportions.size() != components.size()) {
    throw InvalidInput("cluster proportions and components differ in length");
  }
  double total = 0.0;
  for (double t : proportions) {
    if (t < 0.0) throw InvalidInput("cluster proportions must be >= 0");
    total += t;
  }
  if (std::abs(total - 1.0) > kTolerances.proportion_sum) {
    throw InvalidInput("cluster proportions must sum to 1");
  }
}

std::vector<std::size_t> Partition::counts() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(k), 0);
  for (int l : labels) ++out.at(static_cast<std::size_t>(l));
  return out;
}

void Partition::validate(Eigen::Index n) const {
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw InvalidInput("partition length does not match the data set");
  }
  for (int l : labels) {
    if (l < 0 || l >= k) throw InvalidInput("partition label out of range");
  }
}

double mahalanobis_sq(const Vector& x, const GaussianComponent& c) {
  if (x.size() != c.dim()) throw InvalidInput("point and component differ in dimension");
  return CovarianceFactor(c.sigma()).quad(x - c.mu());
}

double max_range(const DataSet& data) {
  const auto& x = data.x();
  return (x.colwise().maxCoeff() - x.colwise().minCoeff()).maxCoeff();
}

double log_normal_density(const Vector& x, const Vector& mu, const CovarianceFactor& f) {
  const double p = static_cast<double>(f.dim());
  return -0.5 * (p * std::log(2.0 * std::numbers::pi) + f.log_det() + f.quad(x - mu));
}

void require_same_dim(const DataSet& data, Eigen::Index p, const char* what) {
  if (data.p() != p) {
    std::ostringstream os;
    os << what << " has dimension " << p << " but data has " << data.p() << " columns";
    throw InvalidInput(os.str());
  }
}

}  // namespace spont
