#include "doctest.h"

#include "cdfsvm/solvers.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace cdfsvm;

namespace {

Dataset random_dataset(std::mt19937_64& rng, Index m, Index d) {
  const FeatureMatrix x = oracle::uniform_points(rng, m, d);
  const Vector y = oracle::random_labels(rng, m);
  return Dataset(x, y, Scaler(Vector::Zero(d), Vector::Ones(d)));
}

SolverConfig tight(double gamma, double epsilon) {
  SolverConfig c;
  c.gamma = gamma;
  c.epsilon = epsilon;
  c.tolerance = 1e-10;
  return c;
}

}  // namespace

TEST_CASE("method names round-trip") {
  for (Method m : all_methods()) CHECK(parse_method(to_string(m)) == m);
  CHECK(parse_method("eps_l1vsvm") == Method::eps_l1vsvm);
  CHECK_THROWS_AS(parse_method("svr"), InvalidArgument);
  CHECK(uses_weights(Method::vsvm));
  CHECK_FALSE(uses_weights(Method::eps_l1svm));
  CHECK(uses_epsilon(Method::eps_l1svm));
}

TEST_CASE("unit weights reproduce the unweighted epsilon machine") {
  std::mt19937_64 rng(31);
  const Dataset d = random_dataset(rng, 25, 2);
  const GramMatrix k = gram(KernelSpec::rbf(0.5), d.features());
  const VWeights ones = v_vector(d.features(), GKernelSpec::gaussian(1.0), MeasureSpec::point_mass());
  const DualModel a = fit_eps_l1_vsvm(d, k, ones, tight(2.0, 0.1));
  const DualModel b = fit_eps_l1_svm(d, k, tight(2.0, 0.1));
  CHECK(a.coefficients == b.coefficients);
  CHECK(a.offset == b.offset);
}

TEST_CASE("epsilon machine satisfies its optimality conditions") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset d = random_dataset(rng, 20, 2);
    const GramMatrix k = gram(KernelSpec::rbf(0.4), d.features());
    const VWeights v = v_vector(d.features(), GKernelSpec::gaussian(0.5), MeasureSpec::empirical(d.features()));
    const double eps = 0.125;
    const DualModel m = fit_eps_l1_vsvm(d, k, v, tight(1.5, eps));
    CHECK(m.converged);
    const Vector f = k.values() * m.coefficients + Vector::Constant(20, m.offset);
    for (Index i = 0; i < 20; ++i) {
      const double r = d.labels()[i] - f[i];
      const double a = m.coefficients[i];
      const double cap = 1.5 * v.values[i];
      CHECK(std::abs(a) <= cap + 1e-12);
      if (std::abs(r) < eps - 1e-6) CHECK(a == 0.0);
      if (a > 1e-9 && a < cap - 1e-9) CHECK(r == doctest::Approx(eps).epsilon(1e-6));
      if (a < -1e-9 && a > -cap + 1e-9) CHECK(r == doctest::Approx(-eps).epsilon(1e-6));
      CHECK(std::min(m.alpha()[i], m.alpha_star()[i]) == 0.0);
    }
  }
}

TEST_CASE("hinge machine against the oracle and its margin conditions") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset d = random_dataset(rng, 7, 2);
    const Matrix k = gram(KernelSpec::rbf(0.6), d.features()).values();
    const Vector ypm = 2.0 * d.labels().array() - 1.0;
    const double gamma = 0.8;
    const DualSolution s = solve_csvm(k, d.labels(), tight(gamma, 0.0));
    // Standard form: min 0.5 b'Qb - 1'b, 0 <= b <= gamma, y'b = 0, with a_i = y_i b_i.
    Vector lo(7);
    Vector hi(7);
    for (Index i = 0; i < 7; ++i) {
      lo[i] = ypm[i] > 0 ? 0.0 : -gamma;
      hi[i] = ypm[i] > 0 ? gamma : 0.0;
    }
    const auto o = oracle::solve_qp(k, ypm, lo, hi, 0.0);
    const Vector a = 2.0 * s.coefficients;
    CHECK(oracle::qp_value(k, ypm, 0.0, a) == doctest::Approx(o.value).epsilon(1e-7));
    const Vector g = 2.0 * (k * s.coefficients).array() + 2.0 * s.bias - 1.0;
    for (Index i = 0; i < 7; ++i) {
      const double beta = std::abs(a[i]);
      const double margin = ypm[i] * g[i];
      if (beta < 1e-9) CHECK(margin >= 1.0 - 1e-6);
      if (beta > gamma - 1e-9) CHECK(margin <= 1.0 + 1e-6);
      if (beta > 1e-9 && beta < gamma - 1e-9) CHECK(margin == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("least squares machine solves its bordered system") {
  std::mt19937_64 rng(34);
  const Dataset d = random_dataset(rng, 12, 3);
  const Matrix k = gram(KernelSpec::rbf(0.7), d.features()).values();
  const double gamma = 4.0;
  const LinearSolution s = solve_lssvm(k, d.labels(), gamma);
  Matrix full = Matrix::Zero(13, 13);
  full.block(1, 1, 12, 12) = k + Matrix::Identity(12, 12) / gamma;
  full.block(0, 1, 1, 12).setOnes();
  full.block(1, 0, 12, 1).setOnes();
  Vector rhs(13);
  rhs << 0.0, d.labels();
  const Vector z = full.fullPivLu().solve(rhs);
  CHECK(s.offset == doctest::Approx(z[0]).epsilon(1e-10));
  CHECK((s.coefficients - z.tail(12)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(s.residual < 1e-12);

  const LinearSolution w = solve_weighted_lssvm(k, d.labels(), Vector::Ones(12), gamma);
  CHECK(w.coefficients == s.coefficients);
}

TEST_CASE("identity V-matrix turns the closed form into least squares") {
  std::mt19937_64 rng(35);
  const Dataset d = random_dataset(rng, 10, 2);
  const Matrix k = gram(KernelSpec::rbf(0.5), d.features()).values();
  const LinearSolution v = solve_vsvm(k, Matrix::Identity(10, 10), d.labels(), 0.25);
  const LinearSolution l = solve_lssvm(k, d.labels(), 4.0);
  CHECK((v.coefficients - l.coefficients).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(v.offset == doctest::Approx(l.offset).epsilon(1e-9));
}

TEST_CASE("closed form is a stationary point of its objective") {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset d = random_dataset(rng, 6, 2);
    const Matrix k = gram(KernelSpec::rbf(0.5), d.features()).values();
    const Matrix v = v_matrix(d.features(), GKernelSpec::gaussian(0.5), MeasureSpec::unit_box(2)).values;
    const double gamma = 0.1;
    const LinearSolution s = solve_vsvm(k, v, d.labels(), gamma);
    Vector z(7);
    z << s.coefficients, s.offset;
    auto obj = [&](const Vector& p) { return vsvm_objective(k, v, d.labels(), gamma, p.head(6), p[6]); };
    CHECK(oracle::fd_gradient(obj, z, 1e-5).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("density weights") {
  FeatureMatrix x(4, 1);
  x << 0.0, 0.1, 0.3, 1.0;
  Vector y(4);
  y << 1, 1, 1, 0;
  CHECK_THROWS_AS(density_weights(x, y, 1), InvalidArgument);
  y << 1, 1, 0, 0;
  const Vector rho = density_weights(x, y, 1);
  CHECK(rho[0] == doctest::Approx(std::exp(-0.01)));
  CHECK(rho[2] == doctest::Approx(std::exp(-0.49)));
}

TEST_CASE("linear scoring matches the kernel expansion") {
  std::mt19937_64 rng(37);
  const Dataset d = random_dataset(rng, 15, 2);
  const GramMatrix k = gram(KernelSpec::linear(), d.features());
  const ClosedFormModel m = fit_lssvm(d, k, 2.0);
  const FeatureMatrix probe = oracle::uniform_points(rng, 5, 2);
  const Vector fast = predict(Model(m), probe);
  const Vector slow = (cross_kernel(KernelSpec::linear(), probe, d.features()) * m.coefficients).array() + m.offset;
  CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-12);
  const auto labels = decide_all(fast);
  for (Index i = 0; i < 5; ++i) CHECK(labels[static_cast<std::size_t>(i)] == (fast[i] > 0.5 ? 1 : 0));
}

TEST_CASE("single-class data is rejected") {
  FeatureMatrix x(3, 1);
  x << 0.0, 0.5, 1.0;
  const Dataset d(x, Vector::Ones(3), Scaler(Vector::Zero(1), Vector::Ones(1)));
  const GramMatrix k = gram(KernelSpec::rbf(1.0), d.features());
  CHECK_THROWS_AS(fit_eps_l1_svm(d, k, {}), InvalidArgument);
  CHECK_THROWS_AS(fit_csvm(d, k, 1.0), InvalidArgument);
}
