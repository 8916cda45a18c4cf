#include "spontaneous/clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

namespace spont {

void RestartConfig::validate() const {
  if (m < 1) throw InvalidInput("restart count m must be >= 1");
  if (max_rounds < 1) throw InvalidInput("max_rounds must be >= 1");
  if (dedup_radius && !(*dedup_radius > 0.0)) {
    throw InvalidInput("dedup radius must be > 0");
  }
}

double RestartConfig::resolved_radius(const DataSet& data) const {
  if (dedup_radius) return *dedup_radius;
  const double r = 1e-3 * max_range(data);
  return r > 0.0 ? r : 1e-3;
}

std::vector<Eigen::Index> farthest_point_indices(const DataSet& data,
                                                 const std::vector<Vector>& centers, int m) {
  const auto n = data.n();
  std::vector<double> dist(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  for (const auto& c : centers) {
    require_same_dim(data, c.size(), "center");
    const Vector d = (data.x().rowwise() - c.transpose()).rowwise().squaredNorm();
    for (Eigen::Index i = 0; i < n; ++i) {
      dist[static_cast<std::size_t>(i)] = std::min(dist[static_cast<std::size_t>(i)], d(i));
    }
  }
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return dist[static_cast<std::size_t>(a)] > dist[static_cast<std::size_t>(b)];
  });
  idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(std::max(m, 0))));
  return idx;
}

std::vector<Vector> farthest_points(const DataSet& data, const CenterSet& centers, int m) {
  std::vector<Vector> out;
  for (auto i : farthest_point_indices(data, centers.centers, m)) out.push_back(data.row(i));
  return out;
}

namespace {

std::vector<Eigen::Index> sample_rows(Eigen::Index n, int m, std::mt19937_64& rng) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  const auto take = std::min<std::size_t>(idx.size(), static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < take; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(take);
  return idx;
}

}  // namespace

CenterSet detect_centers(const DataSet& data, GammaIndex gamma, const RestartConfig& rcfg,
                         const IterationConfig& icfg) {
  rcfg.validate();
  icfg.validate();
  const double radius = rcfg.resolved_radius(data);
  std::mt19937_64 rng(rcfg.seed);
  CenterSet out;

  for (int round = 0; round < rcfg.max_rounds; ++round) {
    const auto inits = out.empty() ? sample_rows(data.n(), rcfg.m, rng)
                                   : farthest_point_indices(data, out.centers, rcfg.m);
    // Each run is independent; merging happens afterwards in init order.
    std::vector<FixedPointResult> runs;
    runs.reserve(inits.size());
    for (auto i : inits) {
      runs.push_back(find_local_min(data, GaussianComponent::identity(data.row(i)), gamma, icfg,
                                    UpdateMode::mu_only));
    }

    const auto before = out.size();
    for (const auto& r : runs) {
      ++out.diagnostics.restarts;
      if (!r.converged) {
        ++out.diagnostics.non_converged;
        continue;
      }
      const Vector& mu = r.component.mu();
      const bool known = std::any_of(out.centers.begin(), out.centers.end(),
                                     [&](const Vector& c) { return (c - mu).norm() < radius; });
      if (known) {
        ++out.diagnostics.merged;
      } else {
        out.centers.push_back(mu);
      }
    }
    ++out.diagnostics.rounds;
    if (out.size() == before) break;
  }
  return out;
}

ClusterModel fit_covariances(const DataSet& data, const CenterSet& centers,
                             GammaIndex gamma_mu, GammaIndex gamma_sigma,
                             const IterationConfig& icfg) {
  if (centers.empty()) throw InvalidInput("fit_covariances needs at least one center");
  ClusterModel model;
  model.gamma_mu = gamma_mu.value();
  model.gamma_sigma = gamma_sigma.value();
  for (std::size_t k = 0; k < centers.size(); ++k) {
    try {
      auto r = find_local_min(data, GaussianComponent::identity(centers.centers[k]), gamma_sigma,
                              icfg, UpdateMode::sigma_only);
      model.components.push_back(std::move(r.component));
    } catch (const SingularCovariance& e) {
      throw SingularCovariance(e.what(), e.iteration(), k);
    }
  }
  return model;
}

ClusterModel identity_model(const CenterSet& centers, GammaIndex gamma_mu) {
  if (centers.empty()) throw InvalidInput("identity_model needs at least one center");
  ClusterModel model;
  model.gamma_mu = gamma_mu.value();
  model.gamma_sigma = gamma_mu.value();
  for (const auto& c : centers.centers) model.components.push_back(GaussianComponent::identity(c));
  return model;
}

Partition assign(const DataSet& data, ClusterModel& model) {
  model.validate();
  require_same_dim(data, model.components.front().dim(), "model");
  const auto n = data.n();
  const auto k = static_cast<Eigen::Index>(model.k());
  Matrix q(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& c = model.components[static_cast<std::size_t>(j)];
    q.col(j) = CovarianceFactor(c.sigma()).quad_rows(data.x(), c.mu());
  }
  Partition part;
  part.k = static_cast<int>(k);
  part.labels.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    q.row(i).minCoeff(&best);  // first minimum on ties
    part.labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  const auto counts = part.counts();
  model.proportions.assign(counts.size(), 0.0);
  for (std::size_t j = 0; j < counts.size(); ++j) {
    model.proportions[j] = static_cast<double>(counts[j]) / static_cast<double>(n);
  }
  return part;
}

ClusteringResult cluster_from_centers(const DataSet& data, const CenterSet& centers,
                                      GammaIndex gamma_mu, GammaIndex gamma_sigma,
                                      const IterationConfig& icfg, CovarianceMode mode) {
  if (centers.empty()) throw NumericalFailure("no restart converged to a center");
  ClusteringResult out;
  out.diagnostics = centers.diagnostics;
  out.model = mode == CovarianceMode::fitted
                  ? fit_covariances(data, centers, gamma_mu, gamma_sigma, icfg)
                  : identity_model(centers, gamma_mu);
  out.model.gamma_sigma = gamma_sigma.value();
  out.partition = assign(data, out.model);

  const auto counts = out.partition.counts();
  if (std::find(counts.begin(), counts.end(), 0) != counts.end()) {
    ClusterModel kept;
    kept.gamma_mu = out.model.gamma_mu;
    kept.gamma_sigma = out.model.gamma_sigma;
    for (std::size_t j = 0; j < counts.size(); ++j) {
      if (counts[j] > 0) {
        kept.components.push_back(out.model.components[j]);
      } else {
        ++out.removed_empty;
      }
    }
    out.model = std::move(kept);
    out.partition = assign(data, out.model);
  }
  return out;
}

ClusteringResult spontaneous_cluster(const DataSet& data, GammaIndex gamma_mu,
                                     GammaIndex gamma_sigma, const RestartConfig& rcfg,
                                     const IterationConfig& icfg, CovarianceMode mode) {
  const CenterSet centers = detect_centers(data, gamma_mu, rcfg, icfg);
  return cluster_from_centers(data, centers, gamma_mu, gamma_sigma, icfg, mode);
}

}  // namespace spont
