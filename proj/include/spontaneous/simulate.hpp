#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spontaneous/clustering.hpp"
#include "spontaneous/core.hpp"
#include "spontaneous/evaluation.hpp"

namespace spont {

struct Sample {
  DataSet data;
  std::vector<int> labels;  ///< generating component of each row
};

/// Draws n observations: a component index by the proportions, then a point
/// from that Gaussian. Deterministic given seed.
Sample sample_mixture(const MixtureSpec& spec, Eigen::Index n, std::uint64_t seed);

enum class Method { spont_range, spont_aic, kmeans_ch, kmeans_gap };

std::string method_name(Method m);
Method parse_method(const std::string& name);  ///< throws InvalidInput

struct ExperimentConfig {
  MixtureSpec mixture;
  Eigen::Index n = 200;
  int runs = 100;
  std::vector<Method> methods{Method::spont_range, Method::spont_aic, Method::kmeans_ch,
                              Method::kmeans_gap};
  std::uint64_t seed = 0;

  // Single-index AIC grid; ignored when both two-index grids are set.
  std::vector<double> grid;
  std::vector<double> grid_mu;
  std::vector<double> grid_sigma;
  CovarianceMode covariance = CovarianceMode::fitted;
  int k_prior = 2;

  int k_max = 10;
  int kmeans_restarts = 10;
  int gap_refs = 20;
  GapRule gap_rule = GapRule::first_se;

  RestartConfig restart;
  IterationConfig iteration;
  int threads = 0;  ///< 0 picks the hardware concurrency

  void validate() const;
  bool two_index() const noexcept { return !grid_mu.empty() && !grid_sigma.empty(); }
};

struct RunOutcome {
  int run = 0;
  Method method = Method::spont_range;
  int k = 0;  ///< 0 when the run failed
  double bhi = 0.0;
  std::optional<double> gamma_mu;
  std::optional<double> gamma_sigma;
  std::vector<double> dm;  ///< per true component, only when k equals the true K
  std::vector<double> dv;
  std::string error;
};

struct MethodSummary {
  Method method = Method::spont_range;
  std::map<int, int> frequency;  ///< K -> count; failed runs land in K = 0
  double mean_bhi = 0.0;         ///< over runs that did not fail
  int correct_runs = 0;
  std::vector<double> mean_dm;  ///< per true component, over correct runs
  std::vector<double> mean_dv;
};

struct ExperimentReport {
  int true_k = 0;
  int runs = 0;
  std::vector<MethodSummary> methods;  ///< in config order
  std::vector<RunOutcome> outcomes;     ///< run-major, methods in config order

  const MethodSummary& summary(Method m) const;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Outcome of a single method on a single labelled sample. Exposed for tests
/// and the command line; run_experiment calls this for every (run, method).
RunOutcome run_method(const ExperimentConfig& cfg, Method method, const Sample& sample,
                      std::uint64_t seed);

/// Greedy nearest-center matching: repeatedly pairs the closest unmatched
/// (detected, true) centers. Returns, for each true component, the index of
/// its detected cluster. Sizes must agree.
std::vector<std::size_t> match_centers(const std::vector<Vector>& detected,
                                       const std::vector<Vector>& truth);

/// Five standard normals at (0,0), (3,3), (-3,3), (-3,-3), (3,-3), equal weights.
MixtureSpec five_cluster_mixture();
/// Two correlated bivariate normals at (0,0) and (3,3), equal weights.
MixtureSpec two_cluster_mixture();

/// n = 200, five-cluster mixture, all four methods, identity covariance and a
/// 10-point AIC grid.
ExperimentConfig five_cluster_design(int runs = 100, std::uint64_t seed = 1);
/// n = 100, two-cluster mixture, spont_aic with separate center and
/// covariance grids.
ExperimentConfig two_cluster_design(int runs = 100, std::uint64_t seed = 1);

}  // namespace spont
