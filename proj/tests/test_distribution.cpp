#include "doctest.h"

#include "cdfsvm/distribution.hpp"
#include "oracles.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace cdfsvm;

namespace {

double normal_pdf(double x, double m, double s) {
  const double z = (x - m) / s;
  return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

TEST_CASE("normal cdf") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-14));
  CHECK(normal_cdf(-1.96) == doctest::Approx(0.024997895148220435).epsilon(1e-12));
}

TEST_CASE("gaussian measure with step G is the normal cdf at the point") {
  const MeasureSpec mu = MeasureSpec::gaussian(Eigen::Vector2d{0.3, 0.6}, Eigen::Vector2d{0.2, 0.5});
  const std::vector<double> at_mean{0.3, 0.6};
  CHECK(std::abs(v_gaussian_step(mu, at_mean) - 0.25) < 1e-12);
  const std::vector<double> x{0.5, 0.1};
  const double expected = oracle::midpoint([](double t) { return normal_pdf(t, 0.3, 0.2); }, -3.0, 0.5, 200000) *
                          oracle::midpoint([](double t) { return normal_pdf(t, 0.6, 0.5); }, -6.0, 0.1, 200000);
  CHECK(v_gaussian_step(mu, x) == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("uniform box with gaussian G matches quadrature") {
  const MeasureSpec mu = MeasureSpec::uniform_box(Vector::Constant(1, 0.2), Vector::Constant(1, 0.7));
  for (double sigma : {0.1, 0.5, 2.0}) {
    const GKernelSpec g = GKernelSpec::gaussian(sigma);
    for (double x : {-1.0, 0.0, 0.2, 0.85, 1.5}) {
      const std::vector<double> p{x};
      const double q = oracle::midpoint([&](double u) { return g.factor(u, x); }, -0.5, 0.9, 100000) / 1.4;
      CHECK(std::abs(v_uniform_gaussian(mu, g, p) - q) < 1e-9);
    }
  }
}

TEST_CASE("additive combination averages the marginals") {
  const MeasureSpec mu = MeasureSpec::unit_box(2);
  const GKernelSpec g = GKernelSpec::gaussian(0.4);
  const std::vector<double> x{0.1, 0.7};
  const std::vector<double> x1{0.1};
  const std::vector<double> x2{0.7};
  const MeasureSpec mu1 = MeasureSpec::unit_box(1);
  const double a = v_uniform_gaussian(mu1, g, x1);
  const double b = v_uniform_gaussian(mu1, g, x2);
  CHECK(v_uniform_gaussian(mu, g, x, Combine::additive) == doctest::Approx(0.5 * (a + b)));
  CHECK(v_uniform_gaussian(mu, g, x, Combine::product) == doctest::Approx(a * b));
}

TEST_CASE("empirical weights are sample averages of G") {
  std::mt19937_64 rng(11);
  const FeatureMatrix ref = oracle::uniform_points(rng, 30, 2);
  const MeasureSpec mu = MeasureSpec::empirical(ref);
  const std::vector<double> x{0.4, 0.6};
  for (const GKernelSpec& g : {GKernelSpec::step(), GKernelSpec::gaussian(0.3)}) {
    double sum = 0.0;
    for (Index s = 0; s < ref.rows(); ++s) sum += g_eval(g, row_span(ref, s), x);
    CHECK(v_empirical(mu, g, x) == doctest::Approx(sum / 30.0).epsilon(1e-14));
  }
}

TEST_CASE("v-vector normalization and out-of-sample values") {
  std::mt19937_64 rng(12);
  const FeatureMatrix x = oracle::uniform_points(rng, 15, 2);
  const VWeights w = v_vector(x, GKernelSpec::gaussian(0.5), MeasureSpec::empirical(x));
  CHECK(w.values.maxCoeff() == 1.0);
  CHECK(w.values.minCoeff() > 0.0);
  const Vector again = v_values(w, x);
  CHECK((again - w.values).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_FALSE(w.provenance().empty());

  const VWeights ones = v_vector(x, GKernelSpec::gaussian(0.5), MeasureSpec::point_mass());
  CHECK(ones.values.isOnes());
}

TEST_CASE("all-zero weights are rejected") {
  FeatureMatrix x(2, 1);
  x << 0.9, 0.95;
  FeatureMatrix ref(1, 1);
  ref << 0.1;
  CHECK_THROWS_AS(v_vector(x, GKernelSpec::step(), MeasureSpec::empirical(ref)), InvalidArgument);
}

TEST_CASE("empirical V-matrix equals the explicit double sum") {
  std::mt19937_64 rng(13);
  const FeatureMatrix x = oracle::uniform_points(rng, 9, 2);
  const FeatureMatrix ref = oracle::uniform_points(rng, 25, 2);
  const GKernelSpec g = GKernelSpec::step();
  const VMatrix v = v_matrix(x, g, MeasureSpec::empirical(ref), Combine::product, false);
  for (Index i = 0; i < 9; ++i) {
    for (Index j = 0; j < 9; ++j) {
      double sum = 0.0;
      for (Index s = 0; s < 25; ++s) sum += g_eval(g, row_span(ref, s), row_span(x, i)) * g_eval(g, row_span(ref, s), row_span(x, j));
      CHECK(v.values(i, j) == sum / 25.0);
    }
  }
}

TEST_CASE("parametric V-matrix entries match quadrature") {
  FeatureMatrix x(2, 1);
  x << 0.2, 0.7;
  SUBCASE("uniform box, gaussian G") {
    const GKernelSpec g = GKernelSpec::gaussian(0.3);
    const VMatrix v = v_matrix(x, g, MeasureSpec::unit_box(1), Combine::product, false);
    const double q = oracle::midpoint([&](double u) { return g.factor(u, 0.2) * g.factor(u, 0.7); }, 0.0, 1.0, 100000);
    CHECK(v.values(0, 1) == doctest::Approx(q).epsilon(1e-9));
  }
  SUBCASE("gaussian measure, gaussian G") {
    const GKernelSpec g = GKernelSpec::gaussian(0.4);
    const MeasureSpec mu = MeasureSpec::gaussian(Vector::Constant(1, 0.5), Vector::Constant(1, 0.3));
    const VMatrix v = v_matrix(x, g, mu, Combine::product, false);
    const double q = oracle::midpoint([&](double u) { return g.factor(u, 0.2) * g.factor(u, 0.7) * normal_pdf(u, 0.5, 0.3); }, -5.0, 6.0, 200000);
    CHECK(v.values(0, 1) == doctest::Approx(q).epsilon(1e-9));
  }
  SUBCASE("gaussian measure, step G") {
    const MeasureSpec mu = MeasureSpec::gaussian(Vector::Constant(1, 0.5), Vector::Constant(1, 0.3));
    const VMatrix v = v_matrix(x, GKernelSpec::step(), mu, Combine::product, false);
    const std::vector<double> p{0.2};
    CHECK(v.values(0, 0) == doctest::Approx(v_gaussian_step(mu, p)));
    CHECK(v.values(0, 1) == v.values(0, 0));
  }
}

TEST_CASE("V-matrix is symmetric PSD with the v-vector on its diagonal") {
  std::mt19937_64 rng(14);
  const FeatureMatrix x = oracle::uniform_points(rng, 10, 2);
  const GKernelSpec g = GKernelSpec::gaussian(0.5);
  const MeasureSpec mu = MeasureSpec::unit_box(2);
  const VMatrix v = v_matrix(x, g, mu);
  CHECK(v.values == v.values.transpose());
  const Eigen::SelfAdjointEigenSolver<Matrix> es(v.values);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
  CHECK(v.values.diagonal().maxCoeff() == 1.0);
  const VMatrix point = v_matrix(x, g, MeasureSpec::point_mass());
  CHECK(point.values.isIdentity());
}

TEST_CASE("measure validation and parsing") {
  CHECK_THROWS_AS(MeasureSpec::uniform_box(Vector::Zero(1), Vector::Zero(1)).validate(1), InvalidArgument);
  CHECK_THROWS_AS(MeasureSpec::unit_box(2).validate(3), InvalidArgument);
  CHECK(parse_measure_kind("uniform") == MeasureSpec::Kind::uniform_box);
  CHECK(parse_measure_kind(to_string(MeasureSpec::Kind::empirical)) == MeasureSpec::Kind::empirical);
  CHECK(parse_combine("additive") == Combine::additive);
  CHECK_THROWS_AS(parse_measure_kind("beta"), InvalidArgument);
  FeatureMatrix x(3, 2);
  x << 0, 1, 0.5, 1, 1, 1;
  const MeasureSpec fit = MeasureSpec::gaussian_fit(x);
  CHECK(fit.mean[0] == doctest::Approx(0.5));
  CHECK(fit.stddev[0] == doctest::Approx(std::sqrt(1.0 / 6.0)));
  CHECK(fit.stddev[1] == 1.0);
}
