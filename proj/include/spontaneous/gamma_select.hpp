#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spontaneous/clustering.hpp"

namespace spont {

/// Strictly increasing list of power indices to scan.
class GammaGrid {
 public:
  explicit GammaGrid(std::vector<double> values);
  /// n log-spaced points from lo to hi inclusive (n == 1 gives {lo}).
  static GammaGrid log_spaced(double lo, double hi, int n);
  static GammaGrid default_grid() { return log_spaced(0.05, 3.0, 20); }

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
};

/// Range heuristic: r = R / (2 k_prior) and gamma = 9 / (2 r^2), i.e.
/// 18 k_prior^2 / R^2 (72 / R^2 for two clusters).
GammaIndex gamma_by_range(const DataSet& data, int k_prior = 2);

/// 2 * (K p (p + 3) / 2 + K - 1)
double aic_penalty(std::size_t k, Eigen::Index p);

/// sum_i log sum_k tau_k phi(x_i; mu_k, Sigma_k), evaluated with a max shift.
double mixture_log_likelihood(const DataSet& data, const ClusterModel& model);

/// -2 log-likelihood of the hard-assignment mixture plus aic_penalty().
/// Throws ZeroDensity if a component has zero proportion.
double aic(const DataSet& data, const ClusterModel& model, const Partition& partition);

struct AicRecord {
  double gamma_mu = 0.0;
  double gamma_sigma = 0.0;
  std::optional<std::size_t> k;
  std::optional<double> aic;
  std::optional<ClusteringResult> result;
  std::string error;  ///< non-empty when this grid point failed

  bool ok() const noexcept { return aic.has_value(); }
};

struct AicReport {
  std::vector<AicRecord> records;  ///< in grid order
  std::size_t best_index = 0;

  const AicRecord& best() const { return records.at(best_index); }
  double best_gamma() const { return best().gamma_mu; }
  const ClusterModel& best_model() const { return best().result->model; }
};

/// Clusters with gamma_mu = gamma_sigma = gamma at each grid point and keeps
/// the minimum-AIC result (ties toward the smaller gamma). Failed grid points
/// are recorded and skipped; throws NumericalFailure if every point fails.
/// With fitted covariances a grid point whose partition has a cluster of p or
/// fewer members counts as failed.
AicReport select_gamma_aic(const DataSet& data, const GammaGrid& grid, const RestartConfig& rcfg,
                           const IterationConfig& icfg,
                           CovarianceMode mode = CovarianceMode::fitted);

/// Product-grid search over (gamma_mu, gamma_sigma). Centers are detected once
/// per gamma_mu and reused for every gamma_sigma. Records are ordered with
/// gamma_mu outer and gamma_sigma inner; ties go to the earlier record.
AicReport select_gamma_aic_two_index(const DataSet& data, const GammaGrid& grid_mu,
                                     const GammaGrid& grid_sigma, const RestartConfig& rcfg,
                                     const IterationConfig& icfg);

}  // namespace spont
