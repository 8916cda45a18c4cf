#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

#include "spontaneous/errors.hpp"

namespace spont {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Numerical tolerances shared by all modules.
struct Tolerances {
  double symmetry = 1e-10;        ///< absolute, elementwise, for covariance matrices
  double proportion_sum = 1e-12;  ///< mixing proportions must sum to one within this
  double max_condition = 1e12;    ///< above this a covariance is treated as singular
  double spherical = 1e-10;       ///< off-diagonal / diagonal spread for sigma^2 I checks
};

inline constexpr Tolerances kTolerances{};

/// n x p observation matrix. Rows are observations; row order is meaningful
/// because label vectors align with it by index.
class DataSet {
 public:
  explicit DataSet(Matrix x, std::vector<std::string> feature_names = {});

  const Matrix& x() const noexcept { return x_; }
  Eigen::Index n() const noexcept { return x_.rows(); }
  Eigen::Index p() const noexcept { return x_.cols(); }
  Vector row(Eigen::Index i) const { return x_.row(i).transpose(); }
  const std::vector<std::string>& feature_names() const noexcept { return names_; }

 private:
  Matrix x_;
  std::vector<std::string> names_;
};

/// Strictly positive power index. The gamma -> 0 limit is never stored; use a
/// small positive value where a limit is needed.
class GammaIndex {
 public:
  explicit GammaIndex(double value);
  double value() const noexcept { return value_; }
  friend bool operator==(GammaIndex, GammaIndex) = default;

 private:
  double value_;
};

/// Mean vector plus symmetric positive-definite covariance.
class GaussianComponent {
 public:
  GaussianComponent(Vector mu, Matrix sigma);

  static GaussianComponent identity(Vector mu);

  const Vector& mu() const noexcept { return mu_; }
  const Matrix& sigma() const noexcept { return sigma_; }
  Eigen::Index dim() const noexcept { return mu_.size(); }

 private:
  Vector mu_;
  Matrix sigma_;
};

/// Cholesky factorization of a covariance, used for every quadratic form,
/// determinant and density evaluation. Throws SingularCovariance when the
/// matrix is not positive definite or its condition number exceeds
/// Tolerances::max_condition.
class CovarianceFactor {
 public:
  explicit CovarianceFactor(const Matrix& sigma);

  /// d^T Sigma^{-1} d
  double quad(const Vector& d) const;
  /// (x_i - mu)^T Sigma^{-1} (x_i - mu) for every row of x.
  Vector quad_rows(const Matrix& x, const Vector& mu) const;
  double log_det() const noexcept { return log_det_; }
  Eigen::Index dim() const noexcept { return dim_; }

 private:
  Eigen::LLT<Matrix> llt_;
  double log_det_ = 0.0;
  Eigen::Index dim_ = 0;
};

/// Ground-truth Gaussian mixture used by simulations and population formulas.
struct MixtureSpec {
  std::vector<GaussianComponent> components;
  std::vector<double> proportions;

  void validate() const;
  Eigen::Index dim() const { return components.empty() ? 0 : components.front().dim(); }
};

/// Fitted clusters: centers, covariances, assigned proportions and the two
/// power indices that produced them.
struct ClusterModel {
  std::vector<GaussianComponent> components;
  std::vector<double> proportions;  ///< empty until assign() fills it
  double gamma_mu = 0.0;
  double gamma_sigma = 0.0;

  std::size_t k() const noexcept { return components.size(); }
  bool has_proportions() const noexcept { return !proportions.empty(); }
  void validate() const;
};

/// Hard assignment of each observation to a cluster in [0, k).
struct Partition {
  std::vector<int> labels;
  int k = 0;

  std::vector<std::size_t> counts() const;
  void validate(Eigen::Index n) const;
};

/// (x - mu)^T Sigma^{-1} (x - mu).
double mahalanobis_sq(const Vector& x, const GaussianComponent& c);

/// Largest per-feature range max_i x_ij - min_i x_ij; zero for a single row.
double max_range(const DataSet& data);

/// log phi(x; mu, Sigma) using a precomputed factorization.
double log_normal_density(const Vector& x, const Vector& mu, const CovarianceFactor& f);

void require_same_dim(const DataSet& data, Eigen::Index p, const char* what);

}  // namespace spont
