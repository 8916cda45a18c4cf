#include "spontaneous/gamma_select.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace spont {

GammaGrid::GammaGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidInput("gamma grid must be nonempty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    static_cast<void>(GammaIndex(values_[i]));
    if (i > 0 && !(values_[i] > values_[i - 1])) {
      throw InvalidInput("gamma grid must be strictly increasing");
    }
  }
}

GammaGrid GammaGrid::log_spaced(double lo, double hi, int n) {
  if (n < 1) throw InvalidInput("gamma grid needs at least one point");
  if (!(lo > 0.0) || !(hi >= lo)) throw InvalidInput("gamma grid bounds must satisfy 0 < lo <= hi");
  if (n == 1) return GammaGrid({lo});
  std::vector<double> v(static_cast<std::size_t>(n));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  v.front() = lo;
  v.back() = hi;
  return GammaGrid(std::move(v));
}

GammaIndex gamma_by_range(const DataSet& data, int k_prior) {
  if (k_prior < 2) throw InvalidInput("k_prior must be >= 2");
  const double range = max_range(data);
  if (!(range > 0.0)) throw ZeroRange("data has zero range; the range heuristic is undefined");
  const double r = range / (2.0 * k_prior);
  return GammaIndex(9.0 / (2.0 * r * r));
}

double aic_penalty(std::size_t k, Eigen::Index p) {
  const double kk = static_cast<double>(k);
  const double pp = static_cast<double>(p);
  return 2.0 * (kk * pp * (pp + 3.0) / 2.0 + kk - 1.0);
}

double mixture_log_likelihood(const DataSet& data, const ClusterModel& model) {
  model.validate();
  if (!model.has_proportions()) throw InvalidInput("model proportions are not filled");
  require_same_dim(data, model.components.front().dim(), "model");
  const auto n = data.n();
  const auto k = static_cast<Eigen::Index>(model.k());
  const double p = static_cast<double>(data.p());
  Matrix a(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double tau = model.proportions[static_cast<std::size_t>(j)];
    if (!(tau > 0.0)) throw ZeroDensity("a mixture component has zero proportion");
    const auto& c = model.components[static_cast<std::size_t>(j)];
    const CovarianceFactor f(c.sigma());
    const Vector q = f.quad_rows(data.x(), c.mu());
    a.col(j) = (std::log(tau) - 0.5 * (p * std::log(2.0 * std::numbers::pi) + f.log_det()) -
                0.5 * q.array())
                   .matrix();
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = a.row(i).maxCoeff();
    if (!std::isfinite(m)) throw ZeroDensity("mixture density vanished at an observation");
    total += m + std::log((a.row(i).array() - m).exp().sum());
  }
  return total;
}

double aic(const DataSet& data, const ClusterModel& model, const Partition& partition) {
  partition.validate(data.n());
  if (static_cast<std::size_t>(partition.k) != model.k()) {
    throw InvalidInput("partition and model disagree on the number of clusters");
  }
  return -2.0 * mixture_log_likelihood(data, model) + aic_penalty(model.k(), data.p());
}

namespace {

AicRecord evaluate(const DataSet& data, const CenterSet& centers, double gmu, double gsigma,
                   const IterationConfig& icfg, CovarianceMode mode) {
  AicRecord rec;
  rec.gamma_mu = gmu;
  rec.gamma_sigma = gsigma;
  try {
    auto res = cluster_from_centers(data, centers, GammaIndex(gmu), GammaIndex(gsigma), icfg, mode);
    // A fitted covariance backed by p or fewer points is degenerate and its
    // likelihood unbounded, so the model is not scored.
    if (mode == CovarianceMode::fitted) {
      for (std::size_t c : res.partition.counts()) {
        if (c <= static_cast<std::size_t>(data.p())) {
          throw DegenerateK("a cluster has too few members to fit its covariance");
        }
      }
    }
    const double value = aic(data, res.model, res.partition);
    if (!std::isfinite(value)) throw NumericalFailure("AIC is not finite");
    rec.k = res.model.k();
    rec.aic = value;
    rec.result = std::move(res);
  } catch (const Error& e) {
    rec.error = e.what();
  }
  return rec;
}

AicReport finish(std::vector<AicRecord> records) {
  AicReport report;
  report.records = std::move(records);
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    if (r.ok() && *r.aic < best) {
      best = *r.aic;
      report.best_index = i;
      any = true;
    }
  }
  if (!any) throw NumericalFailure("clustering failed at every gamma on the grid");
  return report;
}

CenterSet detect_or_record(const DataSet& data, double gmu, const RestartConfig& rcfg,
                           const IterationConfig& icfg, std::string& error) {
  try {
    return detect_centers(data, GammaIndex(gmu), rcfg, icfg);
  } catch (const Error& e) {
    error = e.what();
    return {};
  }
}

}  // namespace

AicReport select_gamma_aic(const DataSet& data, const GammaGrid& grid, const RestartConfig& rcfg,
                           const IterationConfig& icfg, CovarianceMode mode) {
  std::vector<AicRecord> records;
  for (double g : grid.values()) {
    std::string error;
    const auto centers = detect_or_record(data, g, rcfg, icfg, error);
    if (!error.empty()) {
      AicRecord rec;
      rec.gamma_mu = rec.gamma_sigma = g;
      rec.error = error;
      records.push_back(std::move(rec));
      continue;
    }
    records.push_back(evaluate(data, centers, g, g, icfg, mode));
  }
  return finish(std::move(records));
}

AicReport select_gamma_aic_two_index(const DataSet& data, const GammaGrid& grid_mu,
                                     const GammaGrid& grid_sigma, const RestartConfig& rcfg,
                                     const IterationConfig& icfg) {
  std::vector<AicRecord> records;
  for (double gm : grid_mu.values()) {
    std::string error;
    const auto centers = detect_or_record(data, gm, rcfg, icfg, error);
    for (double gs : grid_sigma.values()) {
      if (!error.empty()) {
        AicRecord rec;
        rec.gamma_mu = gm;
        rec.gamma_sigma = gs;
        rec.error = error;
        records.push_back(std::move(rec));
        continue;
      }
      records.push_back(evaluate(data, centers, gm, gs, icfg, CovarianceMode::fitted));
    }
  }
  return finish(std::move(records));
}

}  // namespace spont
