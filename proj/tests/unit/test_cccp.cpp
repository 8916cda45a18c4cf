#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "spontaneous/cccp.hpp"
#include "spontaneous/simulate.hpp"

using namespace spont;
using namespace testing;

namespace {

DataSet mixed_blobs(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Matrix x(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = z(rng) + (i % 2 ? 3.0 : 0.0) * (j + 1);
  }
  return DataSet(x);
}

}  // namespace

TEST_SUITE("cccp") {
  TEST_CASE("iteration config validation") {
    IterationConfig c;
    CHECK_NOTHROW(c.validate());
    c.epsilon = 0;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = IterationConfig{};
    c.max_iter = 0;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = IterationConfig{};
    c.ridge = -1;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
  }

  TEST_CASE("tiny gamma step gives the sample mean and covariance") {
    const DataSet d = mixed_blobs(50, 3, 1);
    const Vector mean = d.x().colwise().mean().transpose();
    const Matrix centered = d.x().rowwise() - mean.transpose();
    const Matrix ml = centered.transpose() * centered / 50.0;
    const auto next = update_step(d, GaussianComponent(vec({5, -5, 2}), 2 * eye(3)),
                                  GammaIndex(1e-12), true, true);
    CHECK((next.mu() - mean).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((next.sigma() - ml).cwiseAbs().maxCoeff() < 1e-9);
  }

  TEST_CASE("identical observations collapse with ridge repair") {
    const auto d = rows({{1, 2}, {1, 2}, {1, 2}});
    const auto r = find_local_min(d, GaussianComponent::identity(vec({0, 0})), GammaIndex(1.0),
                                  IterationConfig{}, UpdateMode::joint);
    CHECK(r.ridge_repaired);
    CHECK(r.iterations == 1);
    CHECK((r.component.mu() - vec({1, 2})).norm() < 1e-12);
    CHECK(r.component.sigma().diagonal().minCoeff() > 0);
  }

  TEST_CASE("single mean step on two points") {
    const auto next = update_step(line({0, 10}), GaussianComponent::identity(scalar(1)),
                                  GammaIndex(1.0), true, false);
    const double a = std::exp(-0.5), b = std::exp(-40.5);
    CHECK(next.mu()(0) == doctest::Approx(10 * b / (a + b)).epsilon(1e-12));
    CHECK(next.sigma()(0, 0) == 1.0);
  }

  TEST_CASE("starts near each cluster reach different minima") {
    MixtureSpec g;
    g.components = {GaussianComponent::identity(scalar(0)), GaussianComponent::identity(scalar(10))};
    g.proportions = {0.5, 0.5};
    const Sample s = sample_mixture(g, 200, 21);
    const auto from1 = find_local_min(s.data, GaussianComponent::identity(scalar(1)),
                                      GammaIndex(1.0), IterationConfig{}, UpdateMode::mu_only);
    const auto from9 = find_local_min(s.data, GaussianComponent::identity(scalar(9)),
                                      GammaIndex(1.0), IterationConfig{}, UpdateMode::mu_only);
    CHECK(from1.converged);
    CHECK(from9.converged);
    CHECK(std::abs(from1.component.mu()(0)) < 0.5);
    CHECK(std::abs(from9.component.mu()(0) - 10) < 0.5);
  }

  TEST_CASE("fixed point agrees with a grid search") {
    const auto d = line({-2, 2});
    const GammaIndex g(3.0);
    const auto r = find_local_min(d, GaussianComponent::identity(scalar(1.9)), g,
                                  IterationConfig{}, UpdateMode::mu_only);
    double best = 0.5, best_loss = 1.0;
    for (double m = 0.5; m <= 3.0; m += 1e-5) {
      const double l = loss_mu(d, scalar(m), g).value;
      if (l < best_loss) {
        best_loss = l;
        best = m;
      }
    }
    CHECK(r.converged);
    CHECK(std::abs(r.component.mu()(0) - best) < 1e-4);
  }

  TEST_CASE("restarting at a fixed point stays there") {
    const DataSet d = mixed_blobs(60, 2, 2);
    const IterationConfig cfg;
    const auto first = find_local_min(d, GaussianComponent::identity(vec({0.2, 0.1})),
                                      GammaIndex(0.8), cfg, UpdateMode::joint);
    REQUIRE(first.converged);
    const auto again = find_local_min(d, first.component, GammaIndex(0.8), cfg, UpdateMode::joint);
    CHECK(again.iterations <= 1);
    CHECK((again.component.mu() - first.component.mu()).norm() < 1e-7);
    CHECK((again.component.sigma() - first.component.sigma()).norm() < 1e-7);
  }

  TEST_CASE("loss trace never increases") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const DataSet d = mixed_blobs(80, 2, 100 + seed);
      for (auto mode : {UpdateMode::mu_only, UpdateMode::sigma_only, UpdateMode::joint}) {
        const auto r = find_local_min(d, GaussianComponent(d.row(seed), 1.5 * eye(2)),
                                      GammaIndex(0.3 + 0.2 * seed), IterationConfig{}, mode);
        REQUIRE(r.loss_trace.size() == static_cast<std::size_t>(r.iterations) + 1);
        for (std::size_t t = 1; t < r.loss_trace.size(); ++t) {
          CHECK(r.loss_trace[t].value <= r.loss_trace[t - 1].value + 1e-12);
        }
      }
    }
  }

  TEST_CASE("max_iter bounds the run") {
    const DataSet d = mixed_blobs(40, 2, 3);
    IterationConfig cfg;
    cfg.max_iter = 2;
    cfg.epsilon = 1e-300;
    const auto r = find_local_min(d, GaussianComponent::identity(vec({5, 5})), GammaIndex(0.5), cfg,
                                  UpdateMode::joint);
    CHECK(r.iterations == 2);
    CHECK_FALSE(r.converged);
  }

  TEST_CASE("translation and scaling equivariance") {
    const DataSet d = mixed_blobs(70, 2, 4);
    const Vector b = vec({7, -3});
    const double a = 2.5;
    const GaussianComponent init(vec({0.5, 0.5}), eye(2));
    const auto base = find_local_min(d, init, GammaIndex(0.6), IterationConfig{}, UpdateMode::joint);
    REQUIRE(base.converged);

    const Matrix shifted = d.x().rowwise() + b.transpose();
    const auto t = find_local_min(DataSet(shifted), GaussianComponent(init.mu() + b, init.sigma()),
                                  GammaIndex(0.6), IterationConfig{}, UpdateMode::joint);
    CHECK((t.component.mu() - (base.component.mu() + b)).norm() < 1e-6);
    CHECK((t.component.sigma() - base.component.sigma()).norm() < 1e-6);

    const auto s = find_local_min(DataSet(a * d.x()), GaussianComponent(a * init.mu(), a * a * init.sigma()),
                                  GammaIndex(0.6), IterationConfig{}, UpdateMode::joint);
    CHECK((s.component.mu() - a * base.component.mu()).norm() < 1e-6);
    CHECK((s.component.sigma() - a * a * base.component.sigma()).norm() < 1e-5);
  }
}
