#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spontaneous/cccp.hpp"
#include "spontaneous/core.hpp"

namespace spont {

struct RestartConfig {
  int m = 10;                           ///< initial values per round
  std::optional<double> dedup_radius;   ///< defaults to 1e-3 * max_range(data)
  int max_rounds = 20;
  std::uint64_t seed = 0;

  void validate() const;
  /// Radius actually used on `data`. Falls back to 1e-3 when the data has zero range.
  double resolved_radius(const DataSet& data) const;
};

struct DetectionDiagnostics {
  int rounds = 0;
  int restarts = 0;
  int non_converged = 0;
  int merged = 0;  ///< converged runs that landed within the radius of a known center
};

/// Detected local minima of the identity-covariance gamma-loss.
struct CenterSet {
  std::vector<Vector> centers;
  DetectionDiagnostics diagnostics;

  std::size_t size() const noexcept { return centers.size(); }
  bool empty() const noexcept { return centers.empty(); }
};

/// Row indices of the m observations farthest from `centers`
/// (distance to the nearest center), ties broken by lowest row index.
std::vector<Eigen::Index> farthest_point_indices(const DataSet& data,
                                                 const std::vector<Vector>& centers, int m);

/// The observations selected by farthest_point_indices().
std::vector<Vector> farthest_points(const DataSet& data, const CenterSet& centers, int m);

/// Finds every local minimum of the identity-covariance gamma-loss reachable
/// by mu-only fixed-point runs. The first round starts from m rows sampled
/// at random; each later round starts from the m rows farthest from the
/// current centers. A converged run within the dedup radius of a known center
/// is merged into it. Stops when a round adds nothing or after max_rounds.
CenterSet detect_centers(const DataSet& data, GammaIndex gamma, const RestartConfig& rcfg,
                         const IterationConfig& icfg);

/// Fits a covariance at each center by sigma-only fixed-point runs from the
/// identity. Proportions are left empty for assign() to fill. A
/// SingularCovariance is rethrown tagged with the center index.
ClusterModel fit_covariances(const DataSet& data, const CenterSet& centers,
                             GammaIndex gamma_mu, GammaIndex gamma_sigma,
                             const IterationConfig& icfg);

/// Model with identity covariance at every center (no covariance fitting).
ClusterModel identity_model(const CenterSet& centers, GammaIndex gamma_mu);

/// Labels each observation with its nearest component in Mahalanobis
/// distance (ties to the lowest index) and sets model.proportions to the
/// assigned fractions.
Partition assign(const DataSet& data, ClusterModel& model);

enum class CovarianceMode { fitted, identity };

struct ClusteringResult {
  ClusterModel model;
  Partition partition;
  DetectionDiagnostics diagnostics;
  int removed_empty = 0;
};

/// detect_centers -> fit_covariances (or identity) -> assign. Components that
/// attract no observation are dropped and the data reassigned once.
/// Throws NumericalFailure when no restart converges.
ClusteringResult spontaneous_cluster(const DataSet& data, GammaIndex gamma_mu,
                                     GammaIndex gamma_sigma, const RestartConfig& rcfg,
                                     const IterationConfig& icfg,
                                     CovarianceMode mode = CovarianceMode::fitted);

/// Clustering from already-detected centers; shared by the gamma searches.
ClusteringResult cluster_from_centers(const DataSet& data, const CenterSet& centers,
                                      GammaIndex gamma_mu, GammaIndex gamma_sigma,
                                      const IterationConfig& icfg, CovarianceMode mode);

}  // namespace spont
