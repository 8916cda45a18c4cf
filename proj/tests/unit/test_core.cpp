#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "helpers.hpp"
#include "spontaneous/core.hpp"

using namespace spont;
using namespace testing;

TEST_SUITE("core") {
  TEST_CASE("data set rejects empty and non-finite input") {
    CHECK_THROWS_AS(DataSet(Matrix(0, 2)), InvalidInput);
    CHECK_THROWS_AS(DataSet(Matrix(3, 0)), InvalidInput);
    Matrix x = Matrix::Zero(2, 2);
    x(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(DataSet{x}, InvalidInput);
    CHECK_THROWS_AS(DataSet(Matrix::Zero(2, 2), {"a"}), InvalidInput);
    const DataSet ok(Matrix::Zero(2, 2), {"a", "b"});
    CHECK(ok.n() == 2);
    CHECK(ok.p() == 2);
    CHECK(ok.feature_names()[1] == "b");
  }

  TEST_CASE("power index must be positive and finite") {
    CHECK_THROWS_AS(GammaIndex(0.0), InvalidInput);
    CHECK_THROWS_AS(GammaIndex(-1.0), InvalidInput);
    CHECK_THROWS_AS(GammaIndex(std::numeric_limits<double>::infinity()), InvalidInput);
    CHECK(GammaIndex(1e-12).value() == 1e-12);
  }

  TEST_CASE("component invariants") {
    CHECK_THROWS_AS(GaussianComponent(vec({0, 0}), Matrix{{1, 0.1}, {0.0, 1}}), InvalidInput);
    CHECK_THROWS_AS(GaussianComponent(vec({0, 0}), Matrix{{1, 2}, {2, 1}}), SingularCovariance);
    CHECK_THROWS_AS(GaussianComponent(vec({0, 0}), eye(3)), InvalidInput);
    // Asymmetry below the 1e-10 tolerance is accepted.
    CHECK_NOTHROW(GaussianComponent(vec({0, 0}), Matrix{{1, 1e-11}, {0.0, 1}}));
  }

  TEST_CASE("mahalanobis examples") {
    const auto c = GaussianComponent::identity(vec({0, 0}));
    CHECK(mahalanobis_sq(vec({0, 0}), c) == 0.0);
    CHECK(mahalanobis_sq(vec({1, 0}), c) == doctest::Approx(1.0).epsilon(1e-15));
    const GaussianComponent d(vec({0, 0}), Matrix{{2, 0}, {0, 0.5}});
    CHECK(mahalanobis_sq(vec({1, 1}), d) == doctest::Approx(2.5).epsilon(1e-14));
    const GaussianComponent r(vec({3, -1}), Matrix{{2, 0.3}, {0.3, 0.5}});
    CHECK(mahalanobis_sq(vec({3, -1}), r) == 0.0);
  }

  TEST_CASE("ill-conditioned covariance is singular") {
    const GaussianComponent c(vec({0, 0}), Matrix{{1, 0}, {0, 1e-13}});
    CHECK_THROWS_AS(mahalanobis_sq(vec({1, 1}), c), SingularCovariance);
  }

  TEST_CASE("mahalanobis properties") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> z;
    for (int t = 0; t < 50; ++t) {
      Vector x(3), mu(3), b(3);
      for (int j = 0; j < 3; ++j) {
        x(j) = z(rng);
        mu(j) = z(rng);
        b(j) = 5 * z(rng);
      }
      Matrix a = Matrix::Random(3, 3);
      Matrix s = a * a.transpose() + 0.5 * eye(3);
      const double base = mahalanobis_sq(x, GaussianComponent(mu, s));
      CHECK(mahalanobis_sq(x + b, GaussianComponent(mu + b, s)) ==
            doctest::Approx(base).epsilon(1e-9));
      const double scale = 0.1 + std::abs(z(rng));
      CHECK(mahalanobis_sq(x, GaussianComponent(mu, scale * eye(3))) ==
            doctest::Approx((x - mu).squaredNorm() / scale).epsilon(1e-12));
    }
  }

  TEST_CASE("max range examples") {
    CHECK(max_range(line({4.0})) == 0.0);
    CHECK(max_range(line({0.0, 10.0})) == 10.0);
    CHECK(max_range(rows({{0, 0}, {5, 1}, {2, -3}})) == 5.0);
  }

  TEST_CASE("max range is permutation invariant") {
    const Matrix x = Matrix::Random(20, 4);
    const double r = max_range(DataSet(x));
    Matrix rev = x.colwise().reverse().rowwise().reverse();
    CHECK(max_range(DataSet(rev)) == r);
  }

  TEST_CASE("mixture and model proportions") {
    MixtureSpec g;
    g.components = {GaussianComponent::identity(vec({0})), GaussianComponent::identity(vec({1}))};
    g.proportions = {0.5, 0.5};
    CHECK_NOTHROW(g.validate());
    g.proportions = {0.5, 0.6};
    CHECK_THROWS_AS(g.validate(), InvalidInput);
    g.proportions = {1.0, 0.0};
    CHECK_THROWS_AS(g.validate(), InvalidInput);

    ClusterModel m;
    m.components = g.components;
    CHECK_NOTHROW(m.validate());
    m.proportions = {1.0, 0.0};
    CHECK_NOTHROW(m.validate());
    m.proportions = {0.7, 0.2};
    CHECK_THROWS_AS(m.validate(), InvalidInput);
  }

  TEST_CASE("partition validation and counts") {
    Partition p{{0, 1, 1, 2}, 3};
    CHECK_NOTHROW(p.validate(4));
    CHECK(p.counts() == std::vector<std::size_t>{1, 2, 1});
    CHECK_THROWS_AS(p.validate(5), InvalidInput);
    p.labels[0] = 3;
    CHECK_THROWS_AS(p.validate(4), InvalidInput);
  }
}
