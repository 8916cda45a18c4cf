#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spontaneous/core.hpp"

namespace spont {

/// Biological homogeneity index of a predicted partition against true
/// categories: the mean over clusters of the fraction of ordered same-category
/// pairs. Clusters with fewer than two members contribute 0 but still count.
double bhi(const Partition& predicted, const std::vector<int>& truth);

/// Maps arbitrary category identifiers to dense integer codes in order of
/// first appearance.
std::vector<int> encode_categories(const std::vector<std::string>& categories);

/// Between- and within-cluster sums of squares about centroids.
struct Dispersion {
  double between = 0.0;
  double within = 0.0;
};

Dispersion dispersion(const DataSet& data, const Partition& partition);

struct ChIndex {
  double value = 0.0;               ///< +infinity when perfect_separation
  bool perfect_separation = false;  ///< within-cluster scatter is exactly zero
};

/// Calinski-Harabasz index (B/(k-1)) / (W/(n-k)). Throws DegenerateK unless
/// 2 <= k <= n-1.
ChIndex ch_index(const DataSet& data, const Partition& partition);

struct KMeansResult {
  Matrix centers;  ///< k x p
  Partition partition;
  double within_ss = 0.0;
  int iterations = 0;                  ///< Lloyd iterations of the best restart
  std::vector<double> objective_trace; ///< within-SS per iteration of the best restart
};

/// Lloyd's algorithm, best of `restarts` runs. Each run seeds greedily with
/// farthest-first traversal from a random first row. An empty cluster is
/// reseeded to the observation farthest from its assigned center.
KMeansResult kmeans(const DataSet& data, int k, int restarts, std::uint64_t seed,
                    int max_iter = 100);

struct GapResult {
  std::vector<int> ks;
  std::vector<double> gap;
  std::vector<double> log_w;
  std::vector<double> ref_mean_log_w;
  std::vector<double> ref_sd;  ///< s_k = sd * sqrt(1 + 1/B)
  int best_k = 0;              ///< argmax of gap
  int first_se_k = 0;          ///< smallest k with gap(k) >= gap(k+1) - s_{k+1}
};

enum class GapRule { argmax, first_se };

inline int gap_choice(const GapResult& g, GapRule rule) {
  return rule == GapRule::argmax ? g.best_k : g.first_se_k;
}

/// Gap statistic E*[log W_k] - log W_k with the reference expectation taken
/// over b_refs uniform draws on the per-feature bounding box of the data.
GapResult gap_statistic(const DataSet& data, int k_min, int k_max, int b_refs, std::uint64_t seed,
                        int restarts = 10);

struct ChSelection {
  std::vector<int> ks;
  std::vector<ChIndex> ch;
  int best_k = 0;
  KMeansResult best;
};

/// Runs kmeans for each k in [max(2, k_min), k_max] and keeps the CH maximizer.
ChSelection select_k_by_ch(const DataSet& data, int k_min, int k_max, int restarts,
                           std::uint64_t seed);

}  // namespace spont
