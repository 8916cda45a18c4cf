#include "spontaneous/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace spont {

double bhi(const Partition& predicted, const std::vector<int>& truth) {
  if (predicted.labels.size() != truth.size()) {
    throw InvalidInput("predicted and true labels differ in length");
  }
  if (predicted.k < 1) throw InvalidInput("partition has no clusters");
  predicted.validate(static_cast<Eigen::Index>(truth.size()));

  std::vector<std::map<int, std::size_t>> members(static_cast<std::size_t>(predicted.k));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++members[static_cast<std::size_t>(predicted.labels[i])][truth[i]];
  }
  double total = 0.0;
  for (const auto& cluster : members) {
    std::size_t size = 0;
    double same = 0.0;
    for (const auto& [category, m] : cluster) {
      size += m;
      same += static_cast<double>(m) * static_cast<double>(m - 1);
    }
    if (size < 2) continue;
    total += same / (static_cast<double>(size) * static_cast<double>(size - 1));
  }
  return total / static_cast<double>(predicted.k);
}

std::vector<int> encode_categories(const std::vector<std::string>& categories) {
  std::map<std::string, int> codes;
  std::vector<int> out;
  out.reserve(categories.size());
  for (const auto& c : categories) {
    auto [it, inserted] = codes.try_emplace(c, static_cast<int>(codes.size()));
    out.push_back(it->second);
  }
  return out;
}

Dispersion dispersion(const DataSet& data, const Partition& partition) {
  partition.validate(data.n());
  const auto p = data.p();
  const auto k = static_cast<std::size_t>(partition.k);
  Matrix sums = Matrix::Zero(static_cast<Eigen::Index>(k), p);
  std::vector<double> counts(k, 0.0);
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const auto l = static_cast<std::size_t>(partition.labels[static_cast<std::size_t>(i)]);
    sums.row(static_cast<Eigen::Index>(l)) += data.x().row(i);
    counts[l] += 1.0;
  }
  const Eigen::RowVectorXd grand = data.x().colwise().mean();
  Dispersion d;
  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] == 0.0) continue;
    const auto row = static_cast<Eigen::Index>(j);
    sums.row(row) /= counts[j];
    d.between += counts[j] * (sums.row(row) - grand).squaredNorm();
  }
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const auto l = static_cast<Eigen::Index>(partition.labels[static_cast<std::size_t>(i)]);
    d.within += (data.x().row(i) - sums.row(l)).squaredNorm();
  }
  return d;
}

ChIndex ch_index(const DataSet& data, const Partition& partition) {
  const int k = partition.k;
  const auto n = data.n();
  if (k < 2 || k >= n) throw DegenerateK("CH index needs 2 <= k <= n - 1");
  const Dispersion d = dispersion(data, partition);
  if (d.within == 0.0) return {std::numeric_limits<double>::infinity(), true};
  const double kk = static_cast<double>(k);
  return {(d.between / (kk - 1.0)) / (d.within / (static_cast<double>(n) - kk)), false};
}

namespace {

Matrix farthest_first(const Matrix& x, int k, Eigen::Index first) {
  const auto n = x.rows();
  Matrix centers(k, x.cols());
  centers.row(0) = x.row(first);
  Vector nearest = (x.rowwise() - x.row(first)).rowwise().squaredNorm();
  for (int j = 1; j < k; ++j) {
    Eigen::Index next = 0;
    nearest.maxCoeff(&next);
    centers.row(j) = x.row(next);
    nearest = nearest.cwiseMin((x.rowwise() - x.row(next)).rowwise().squaredNorm());
  }
  static_cast<void>(n);
  return centers;
}

struct LloydRun {
  Matrix centers;
  std::vector<int> labels;
  double within = 0.0;
  int iterations = 0;
  std::vector<double> trace;
};

LloydRun lloyd(const Matrix& x, Matrix centers, int max_iter) {
  const auto n = x.rows();
  const auto k = centers.rows();
  LloydRun run;
  run.labels.assign(static_cast<std::size_t>(n), -1);
  Matrix dist(n, k);
  for (int it = 1; it <= max_iter; ++it) {
    for (Eigen::Index j = 0; j < k; ++j) {
      dist.col(j) = (x.rowwise() - centers.row(j)).rowwise().squaredNorm();
    }
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index best = 0;
      dist.row(i).minCoeff(&best);
      auto& l = run.labels[static_cast<std::size_t>(i)];
      if (l != static_cast<int>(best)) {
        l = static_cast<int>(best);
        changed = true;
      }
    }
    Matrix sums = Matrix::Zero(k, x.cols());
    std::vector<double> counts(static_cast<std::size_t>(k), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto l = run.labels[static_cast<std::size_t>(i)];
      sums.row(l) += x.row(i);
      counts[static_cast<std::size_t>(l)] += 1.0;
    }
    for (Eigen::Index j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0.0) {
        centers.row(j) = sums.row(j) / counts[static_cast<std::size_t>(j)];
      }
    }
    double within = 0.0;
    Vector own(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      own(i) = (x.row(i) - centers.row(run.labels[static_cast<std::size_t>(i)])).squaredNorm();
      within += own(i);
    }
    run.trace.push_back(within);
    run.within = within;
    run.iterations = it;
    // Reseed empty clusters at the worst-fitting observations.
    bool reseeded = false;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0.0) continue;
      Eigen::Index far = 0;
      own.maxCoeff(&far);
      centers.row(j) = x.row(far);
      own(far) = -1.0;
      reseeded = true;
    }
    if (!changed && !reseeded) break;
  }
  run.centers = std::move(centers);
  return run;
}

}  // namespace

KMeansResult kmeans(const DataSet& data, int k, int restarts, std::uint64_t seed, int max_iter) {
  const auto n = data.n();
  if (k < 1 || k > n) throw InvalidInput("kmeans needs 1 <= k <= n");
  if (restarts < 1) throw InvalidInput("kmeans needs at least one restart");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);

  KMeansResult best;
  best.within_ss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    const Eigen::Index first = pick(rng);
    LloydRun run = lloyd(data.x(), farthest_first(data.x(), k, first), max_iter);
    if (run.within < best.within_ss) {
      best.centers = std::move(run.centers);
      best.partition.labels = std::move(run.labels);
      best.partition.k = k;
      best.within_ss = run.within;
      best.iterations = run.iterations;
      best.objective_trace = std::move(run.trace);
    }
  }
  return best;
}

GapResult gap_statistic(const DataSet& data, int k_min, int k_max, int b_refs, std::uint64_t seed,
                        int restarts) {
  const auto n = data.n();
  if (k_min < 1 || k_max < k_min || k_max > n - 1) {
    throw InvalidInput("gap statistic needs 1 <= k_min <= k_max <= n - 1");
  }
  if (b_refs < 1) throw InvalidInput("gap statistic needs at least one reference draw");

  const Eigen::RowVectorXd lo = data.x().colwise().minCoeff();
  const Eigen::RowVectorXd hi = data.x().colwise().maxCoeff();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<DataSet> refs;
  refs.reserve(static_cast<std::size_t>(b_refs));
  for (int b = 0; b < b_refs; ++b) {
    Matrix x(n, data.p());
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < data.p(); ++j) x(i, j) = lo(j) + unit(rng) * (hi(j) - lo(j));
    }
    refs.emplace_back(std::move(x));
  }

  GapResult out;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = k_min; k <= k_max; ++k) {
    const double log_w = std::log(kmeans(data, k, restarts, seed).within_ss);
    std::vector<double> ref_logs;
    ref_logs.reserve(refs.size());
    for (std::size_t b = 0; b < refs.size(); ++b) {
      ref_logs.push_back(std::log(kmeans(refs[b], k, restarts, seed + b + 1).within_ss));
    }
    double mean = 0.0;
    for (double v : ref_logs) mean += v;
    mean /= static_cast<double>(b_refs);
    double var = 0.0;
    for (double v : ref_logs) var += (v - mean) * (v - mean);
    var /= static_cast<double>(b_refs);
    const double gap = mean - log_w;
    out.ks.push_back(k);
    out.gap.push_back(gap);
    out.log_w.push_back(log_w);
    out.ref_mean_log_w.push_back(mean);
    out.ref_sd.push_back(std::sqrt(var) * std::sqrt(1.0 + 1.0 / b_refs));
    if (gap > best) {
      best = gap;
      out.best_k = k;
    }
  }
  out.first_se_k = out.ks.back();
  for (std::size_t i = 0; i + 1 < out.ks.size(); ++i) {
    if (out.gap[i] >= out.gap[i + 1] - out.ref_sd[i + 1]) {
      out.first_se_k = out.ks[i];
      break;
    }
  }
  return out;
}

ChSelection select_k_by_ch(const DataSet& data, int k_min, int k_max, int restarts,
                           std::uint64_t seed) {
  const int lo = std::max(2, k_min);
  const int hi = std::min<int>(k_max, static_cast<int>(data.n()) - 1);
  if (hi < lo) throw DegenerateK("no admissible k for the CH index");
  ChSelection out;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = lo; k <= hi; ++k) {
    KMeansResult km = kmeans(data, k, restarts, seed);
    const ChIndex ch = ch_index(data, km.partition);
    out.ks.push_back(k);
    out.ch.push_back(ch);
    if (ch.value > best) {
      best = ch.value;
      out.best_k = k;
      out.best = std::move(km);
    }
  }
  return out;
}

}  // namespace spont
