#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spontaneous/bimodality.hpp"
#include "spontaneous/clustering.hpp"
#include "spontaneous/evaluation.hpp"
#include "spontaneous/gamma_objective.hpp"
#include "spontaneous/gamma_select.hpp"
#include "spontaneous/simulate.hpp"

namespace py = pybind11;
using namespace spont;

namespace {

DataSet as_data(const Matrix& x) { return DataSet(x); }

py::dict model_dict(const ClusterModel& m) {
  py::list mus, sigmas;
  for (const auto& c : m.components) {
    mus.append(c.mu());
    sigmas.append(c.sigma());
  }
  py::dict d;
  d["gamma_mu"] = m.gamma_mu;
  d["gamma_sigma"] = m.gamma_sigma;
  d["means"] = mus;
  d["covariances"] = sigmas;
  d["proportions"] = m.proportions;
  return d;
}

py::dict result_dict(const ClusteringResult& r) {
  py::dict d = model_dict(r.model);
  d["labels"] = r.partition.labels;
  d["k"] = r.model.k();
  d["rounds"] = r.diagnostics.rounds;
  d["restarts"] = r.diagnostics.restarts;
  return d;
}

RestartConfig restart_config(int m, int max_rounds, std::uint64_t seed) {
  RestartConfig r;
  r.m = m;
  r.max_rounds = max_rounds;
  r.seed = seed;
  return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Clustering by the local minima of the gamma-loss";

  // Translators run newest first, so the derived type is registered last.
  py::register_exception<Error>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);

  m.def(
      "loss_mu",
      [](const Matrix& x, const Vector& mu, double gamma) {
        return loss_mu(as_data(x), mu, GammaIndex(gamma)).value;
      },
      py::arg("x"), py::arg("mu"), py::arg("gamma"));

  m.def(
      "find_local_min",
      [](const Matrix& x, const Vector& mu, const Matrix& sigma, double gamma,
         const std::string& mode) {
        UpdateMode um = UpdateMode::joint;
        if (mode == "mu") {
          um = UpdateMode::mu_only;
        } else if (mode == "sigma") {
          um = UpdateMode::sigma_only;
        } else if (mode != "joint") {
          throw InvalidInput("mode must be 'mu', 'sigma' or 'joint'");
        }
        const auto r = find_local_min(as_data(x), GaussianComponent(mu, sigma), GammaIndex(gamma),
                                      IterationConfig{}, um);
        py::dict d;
        d["mu"] = r.component.mu();
        d["sigma"] = r.component.sigma();
        d["iterations"] = r.iterations;
        d["converged"] = r.converged;
        std::vector<double> trace;
        for (const auto& l : r.loss_trace) trace.push_back(l.value);
        d["loss_trace"] = trace;
        return d;
      },
      py::arg("x"), py::arg("mu"), py::arg("sigma"), py::arg("gamma"), py::arg("mode") = "joint");

  m.def(
      "detect_centers",
      [](const Matrix& x, double gamma, int m_init, int max_rounds, std::uint64_t seed) {
        const auto cs = detect_centers(as_data(x), GammaIndex(gamma),
                                       restart_config(m_init, max_rounds, seed), IterationConfig{});
        return cs.centers;
      },
      py::arg("x"), py::arg("gamma"), py::arg("m") = 10, py::arg("max_rounds") = 20,
      py::arg("seed") = 0);

  m.def(
      "cluster",
      [](const Matrix& x, double gamma, std::optional<double> gamma_sigma, bool fixed_identity,
         std::uint64_t seed) {
        const auto r = spontaneous_cluster(
            as_data(x), GammaIndex(gamma), GammaIndex(gamma_sigma.value_or(gamma)),
            restart_config(10, 20, seed), IterationConfig{},
            fixed_identity ? CovarianceMode::identity : CovarianceMode::fitted);
        return result_dict(r);
      },
      py::arg("x"), py::arg("gamma"), py::arg("gamma_sigma") = py::none(),
      py::arg("fixed_identity") = false, py::arg("seed") = 0);

  m.def(
      "gamma_by_range",
      [](const Matrix& x, int k_prior) { return gamma_by_range(as_data(x), k_prior).value(); },
      py::arg("x"), py::arg("k_prior") = 2);

  m.def("aic_penalty", &aic_penalty, py::arg("k"), py::arg("p"));

  m.def(
      "select_gamma_aic",
      [](const Matrix& x, const std::vector<double>& grid, bool fixed_identity,
         std::uint64_t seed) {
        const auto rep = select_gamma_aic(
            as_data(x), GammaGrid(grid), restart_config(10, 20, seed), IterationConfig{},
            fixed_identity ? CovarianceMode::identity : CovarianceMode::fitted);
        py::list curve;
        for (const auto& rec : rep.records) {
          curve.append(py::make_tuple(rec.gamma_mu, rec.k ? py::cast(*rec.k) : py::none(),
                                      rec.aic ? py::cast(*rec.aic) : py::none()));
        }
        py::dict d = result_dict(*rep.best().result);
        d["gamma"] = rep.best_gamma();
        d["curve"] = curve;
        return d;
      },
      py::arg("x"), py::arg("grid"), py::arg("fixed_identity") = false, py::arg("seed") = 0);

  m.def(
      "check_bimodal",
      [](const Vector& nu, double sigma2, double tau1, double gamma) {
        const auto v = check_bimodal(TwoComponentSpec{nu, sigma2, tau1, gamma});
        py::dict d;
        d["bimodal"] = v.bimodal;
        d["d"] = v.d;
        d["displacement_bound"] = v.displacement_bound ? py::cast(*v.displacement_bound) : py::none();
        return d;
      },
      py::arg("nu"), py::arg("sigma2"), py::arg("tau1"), py::arg("gamma"));

  m.def(
      "oracle_mode_count",
      [](const Vector& nu, double sigma2, double tau1, double gamma, int grid_n) {
        return oracle_mode_count(TwoComponentSpec{nu, sigma2, tau1, gamma}, grid_n);
      },
      py::arg("nu"), py::arg("sigma2"), py::arg("tau1"), py::arg("gamma"),
      py::arg("grid_n") = 4000);

  m.def(
      "bhi",
      [](const std::vector<int>& predicted, const std::vector<int>& truth) {
        Partition p;
        p.labels = predicted;
        p.k = predicted.empty() ? 0 : *std::max_element(predicted.begin(), predicted.end()) + 1;
        return bhi(p, truth);
      },
      py::arg("predicted"), py::arg("truth"));

  m.def(
      "ch_index",
      [](const Matrix& x, const std::vector<int>& labels) {
        Partition p;
        p.labels = labels;
        p.k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
        return ch_index(as_data(x), p).value;
      },
      py::arg("x"), py::arg("labels"));

  m.def(
      "kmeans",
      [](const Matrix& x, int k, int restarts, std::uint64_t seed) {
        const auto r = kmeans(as_data(x), k, restarts, seed);
        return py::make_tuple(r.centers, r.partition.labels, r.within_ss);
      },
      py::arg("x"), py::arg("k"), py::arg("restarts") = 10, py::arg("seed") = 0);

  m.def(
      "sample_mixture",
      [](const std::vector<Vector>& means, const std::vector<Matrix>& covs,
         const std::vector<double>& proportions, Eigen::Index n, std::uint64_t seed) {
        if (means.size() != covs.size()) throw InvalidInput("means and covariances differ in count");
        MixtureSpec g;
        for (std::size_t i = 0; i < means.size(); ++i) g.components.emplace_back(means[i], covs[i]);
        g.proportions = proportions;
        auto s = sample_mixture(g, n, seed);
        return py::make_tuple(s.data.x(), s.labels);
      },
      py::arg("means"), py::arg("covariances"), py::arg("proportions"), py::arg("n"),
      py::arg("seed") = 0);
}
