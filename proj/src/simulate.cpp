#include "spontaneous/simulate.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "spontaneous/evaluation.hpp"
#include "spontaneous/gamma_select.hpp"

namespace spont {

Sample sample_mixture(const MixtureSpec& spec, Eigen::Index n, std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw InvalidInput("sample size must be positive");
  const auto p = spec.dim();
  std::vector<Matrix> chol;
  chol.reserve(spec.components.size());
  for (const auto& c : spec.components) chol.push_back(c.sigma().llt().matrixL());

  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> pick(spec.proportions.begin(), spec.proportions.end());
  std::normal_distribution<double> z;
  Matrix x(n, p);
  std::vector<int> labels(static_cast<std::size_t>(n));
  Vector e(p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int k = pick(rng);
    for (Eigen::Index j = 0; j < p; ++j) e(j) = z(rng);
    const auto& comp = spec.components[static_cast<std::size_t>(k)];
    x.row(i) = (comp.mu() + chol[static_cast<std::size_t>(k)] * e).transpose();
    labels[static_cast<std::size_t>(i)] = k;
  }
  return {DataSet(std::move(x)), std::move(labels)};
}

std::string method_name(Method m) {
  switch (m) {
    case Method::spont_range: return "spont_range";
    case Method::spont_aic: return "spont_aic";
    case Method::kmeans_ch: return "kmeans_ch";
    case Method::kmeans_gap: return "kmeans_gap";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::spont_range, Method::spont_aic, Method::kmeans_ch, Method::kmeans_gap}) {
    if (method_name(m) == name) return m;
  }
  throw InvalidInput("unknown method '" + name + "'");
}

void ExperimentConfig::validate() const {
  mixture.validate();
  if (n < 2) throw InvalidInput("experiment needs n >= 2");
  if (runs < 1) throw InvalidInput("experiment needs runs >= 1");
  if (methods.empty()) throw InvalidInput("experiment needs at least one method");
  if (k_prior < 1) throw InvalidInput("k_prior must be >= 1");
  if (k_max < 2) throw InvalidInput("k_max must be >= 2");
  if (kmeans_restarts < 1 || gap_refs < 1) throw InvalidInput("restarts and gap_refs must be >= 1");
  if (threads < 0) throw InvalidInput("threads must be >= 0");
  if (grid_mu.empty() != grid_sigma.empty()) {
    throw InvalidInput("grid_mu and grid_sigma must be given together");
  }
  const bool wants_aic =
      std::find(methods.begin(), methods.end(), Method::spont_aic) != methods.end();
  if (wants_aic && grid.empty() && !two_index()) throw InvalidInput("spont_aic needs a gamma grid");
  if (!grid.empty()) static_cast<void>(GammaGrid(grid));
  if (two_index()) {
    static_cast<void>(GammaGrid(grid_mu));
    static_cast<void>(GammaGrid(grid_sigma));
  }
  restart.validate();
  iteration.validate();
}

const MethodSummary& ExperimentReport::summary(Method m) const {
  for (const auto& s : methods) {
    if (s.method == m) return s;
  }
  throw InvalidInput("method '" + method_name(m) + "' was not run");
}

std::vector<std::size_t> match_centers(const std::vector<Vector>& detected,
                                       const std::vector<Vector>& truth) {
  const std::size_t k = truth.size();
  if (detected.size() != k) throw InvalidInput("matching needs equal numbers of centers");
  std::vector<std::size_t> out(k, 0);
  std::vector<bool> used_d(k, false), used_t(k, false);
  for (std::size_t step = 0; step < k; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bd = 0, bt = 0;
    for (std::size_t t = 0; t < k; ++t) {
      if (used_t[t]) continue;
      for (std::size_t d = 0; d < k; ++d) {
        if (used_d[d]) continue;
        const double dist = (detected[d] - truth[t]).squaredNorm();
        if (dist < best) {
          best = dist;
          bd = d;
          bt = t;
        }
      }
    }
    used_d[bd] = used_t[bt] = true;
    out[bt] = bd;
  }
  return out;
}

namespace {

// Maximum likelihood covariance of each cluster; identity for clusters with
// fewer than two members.
std::vector<Matrix> cluster_covariances(const DataSet& data, const Partition& part) {
  const auto p = data.p();
  std::vector<Matrix> out;
  for (int j = 0; j < part.k; ++j) {
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < part.labels.size(); ++i) {
      if (part.labels[i] == j) rows.push_back(static_cast<Eigen::Index>(i));
    }
    if (rows.size() < 2) {
      out.push_back(Matrix::Identity(p, p));
      continue;
    }
    Matrix m(static_cast<Eigen::Index>(rows.size()), p);
    for (std::size_t r = 0; r < rows.size(); ++r) m.row(static_cast<Eigen::Index>(r)) = data.x().row(rows[r]);
    const Matrix c = m.rowwise() - m.colwise().mean();
    out.push_back(c.transpose() * c / static_cast<double>(rows.size()));
  }
  return out;
}

void fill_distances(RunOutcome& out, const MixtureSpec& truth, const std::vector<Vector>& centers,
                    const std::vector<Matrix>& covs) {
  std::vector<Vector> true_mu;
  for (const auto& c : truth.components) true_mu.push_back(c.mu());
  const auto match = match_centers(centers, true_mu);
  for (std::size_t t = 0; t < match.size(); ++t) {
    out.dm.push_back((centers[match[t]] - true_mu[t]).norm());
    out.dv.push_back((covs[match[t]] - truth.components[t].sigma()).norm());
  }
}

void finish_spontaneous(RunOutcome& out, const ClusteringResult& r, const Sample& sample,
                        const MixtureSpec& truth) {
  out.k = static_cast<int>(r.model.k());
  out.bhi = bhi(r.partition, sample.labels);
  out.gamma_mu = r.model.gamma_mu;
  out.gamma_sigma = r.model.gamma_sigma;
  if (out.k == static_cast<int>(truth.components.size())) {
    std::vector<Vector> centers;
    std::vector<Matrix> covs;
    for (const auto& c : r.model.components) {
      centers.push_back(c.mu());
      covs.push_back(c.sigma());
    }
    fill_distances(out, truth, centers, covs);
  }
}

void finish_kmeans(RunOutcome& out, const KMeansResult& km, const Sample& sample,
                   const MixtureSpec& truth) {
  out.k = km.partition.k;
  out.bhi = bhi(km.partition, sample.labels);
  if (out.k == static_cast<int>(truth.components.size())) {
    std::vector<Vector> centers;
    for (Eigen::Index j = 0; j < km.centers.rows(); ++j) centers.push_back(km.centers.row(j).transpose());
    fill_distances(out, truth, centers, cluster_covariances(sample.data, km.partition));
  }
}

}  // namespace

RunOutcome run_method(const ExperimentConfig& cfg, Method method, const Sample& sample,
                      std::uint64_t seed) {
  RunOutcome out;
  out.method = method;
  RestartConfig rcfg = cfg.restart;
  rcfg.seed = seed;
  const auto& data = sample.data;
  try {
    switch (method) {
      case Method::spont_range: {
        const GammaIndex g = gamma_by_range(data, cfg.k_prior);
        finish_spontaneous(out, spontaneous_cluster(data, g, g, rcfg, cfg.iteration, cfg.covariance),
                           sample, cfg.mixture);
        break;
      }
      case Method::spont_aic: {
        const AicReport rep =
            cfg.two_index()
                ? select_gamma_aic_two_index(data, GammaGrid(cfg.grid_mu), GammaGrid(cfg.grid_sigma),
                                             rcfg, cfg.iteration)
                : select_gamma_aic(data, GammaGrid(cfg.grid), rcfg, cfg.iteration, cfg.covariance);
        finish_spontaneous(out, *rep.best().result, sample, cfg.mixture);
        break;
      }
      case Method::kmeans_ch: {
        const ChSelection sel = select_k_by_ch(data, 2, cfg.k_max, cfg.kmeans_restarts, seed);
        finish_kmeans(out, sel.best, sample, cfg.mixture);
        break;
      }
      case Method::kmeans_gap: {
        const GapResult gap = gap_statistic(data, 1, std::min<int>(cfg.k_max, static_cast<int>(data.n()) - 1),
                                            cfg.gap_refs, seed, cfg.kmeans_restarts);
        finish_kmeans(out, kmeans(data, gap_choice(gap, cfg.gap_rule), cfg.kmeans_restarts, seed), sample, cfg.mixture);
        break;
      }
    }
  } catch (const Error& e) {
    out = RunOutcome{};
    out.method = method;
    out.error = e.what();
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto runs = static_cast<std::size_t>(cfg.runs);
  const std::size_t n_methods = cfg.methods.size();
  std::vector<RunOutcome> outcomes(runs * n_methods);

  auto work = [&](std::size_t r) {
    const std::uint64_t seed = cfg.seed + r;
    const Sample sample = sample_mixture(cfg.mixture, cfg.n, seed);
    for (std::size_t m = 0; m < n_methods; ++m) {
      RunOutcome o = run_method(cfg, cfg.methods[m], sample, seed);
      o.run = static_cast<int>(r);
      outcomes[r * n_methods + m] = std::move(o);
    }
  };

  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(runs));
  if (threads <= 1) {
    for (std::size_t r = 0; r < runs; ++r) work(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < runs; r = next++) work(r);
      });
    }
    for (auto& th : pool) th.join();
  }

  ExperimentReport rep;
  rep.true_k = static_cast<int>(cfg.mixture.components.size());
  rep.runs = cfg.runs;
  for (std::size_t m = 0; m < n_methods; ++m) {
    MethodSummary s;
    s.method = cfg.methods[m];
    s.mean_dm.assign(static_cast<std::size_t>(rep.true_k), 0.0);
    s.mean_dv.assign(static_cast<std::size_t>(rep.true_k), 0.0);
    int ok = 0;
    for (std::size_t r = 0; r < runs; ++r) {
      const RunOutcome& o = outcomes[r * n_methods + m];
      ++s.frequency[o.k];
      if (!o.error.empty()) continue;
      ++ok;
      s.mean_bhi += o.bhi;
      if (o.dm.empty()) continue;
      ++s.correct_runs;
      for (std::size_t t = 0; t < o.dm.size(); ++t) {
        s.mean_dm[t] += o.dm[t];
        s.mean_dv[t] += o.dv[t];
      }
    }
    s.mean_bhi = ok > 0 ? s.mean_bhi / ok : std::numeric_limits<double>::quiet_NaN();
    for (std::size_t t = 0; t < s.mean_dm.size(); ++t) {
      if (s.correct_runs > 0) {
        s.mean_dm[t] /= s.correct_runs;
        s.mean_dv[t] /= s.correct_runs;
      } else {
        s.mean_dm[t] = s.mean_dv[t] = std::numeric_limits<double>::quiet_NaN();
      }
    }
    rep.methods.push_back(std::move(s));
  }
  rep.outcomes = std::move(outcomes);
  return rep;
}

MixtureSpec five_cluster_mixture() {
  MixtureSpec g;
  const Matrix eye = Matrix::Identity(2, 2);
  for (auto [a, b] : {std::pair{0.0, 0.0}, {3.0, 3.0}, {-3.0, 3.0}, {-3.0, -3.0}, {3.0, -3.0}}) {
    g.components.emplace_back(Vector{{a, b}}, eye);
    g.proportions.push_back(0.2);
  }
  return g;
}

MixtureSpec two_cluster_mixture() {
  MixtureSpec g;
  g.components.emplace_back(Vector{{0.0, 0.0}}, Matrix{{1.0, 0.5}, {0.5, 1.0}});
  g.components.emplace_back(Vector{{3.0, 3.0}}, Matrix{{2.0, -0.5}, {-0.5, 2.0}});
  g.proportions = {0.5, 0.5};
  return g;
}

ExperimentConfig five_cluster_design(int runs, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.mixture = five_cluster_mixture();
  cfg.n = 200;
  cfg.runs = runs;
  cfg.seed = seed;
  cfg.grid = GammaGrid::log_spaced(0.1, 2.0, 10).values();
  cfg.covariance = CovarianceMode::identity;
  return cfg;
}

ExperimentConfig two_cluster_design(int runs, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.mixture = two_cluster_mixture();
  cfg.n = 100;
  cfg.runs = runs;
  cfg.seed = seed;
  cfg.methods = {Method::spont_aic};
  cfg.grid_mu = GammaGrid::log_spaced(0.5, 3.0, 8).values();
  cfg.grid_sigma = GammaGrid::log_spaced(1.0, 8.0, 8).values();
  return cfg;
}

}  // namespace spont
