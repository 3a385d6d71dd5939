#include "doctest.h"

#include "cdfsvm/kernels.hpp"
#include "oracles.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace cdfsvm;

TEST_CASE("rbf and linear values") {
  const std::vector<double> a{0.0, 1.0};
  const std::vector<double> b{1.0, 3.0};
  CHECK(k_eval(KernelSpec::rbf(2.0), a, b) == doctest::Approx(std::exp(-5.0 / 8.0)));
  CHECK(k_eval(KernelSpec::linear(), a, b) == doctest::Approx(3.0));
  CHECK(k_eval(KernelSpec::rbf(0.5), a, a) == 1.0);
  CHECK_THROWS_AS(k_eval(KernelSpec::rbf(0.0), a, b), InvalidArgument);
  const std::vector<double> c{1.0};
  CHECK_THROWS_AS(k_eval(KernelSpec::linear(), a, c), InvalidArgument);
}

TEST_CASE("step and gaussian G") {
  const std::vector<double> u{0.5, 0.5};
  const std::vector<double> lo{0.2, 0.5};
  const std::vector<double> hi{0.2, 0.6};
  CHECK(g_eval(GKernelSpec::step(), u, lo) == 1.0);
  CHECK(g_eval(GKernelSpec::step(), u, hi) == 0.0);
  CHECK(g_eval(GKernelSpec::gaussian(0.5), u, hi) ==
        doctest::Approx(std::exp(-(0.09 + 0.01) / 0.5)));
}

TEST_CASE("gram matrices are symmetric positive semidefinite") {
  std::mt19937_64 rng(3);
  const FeatureMatrix x = oracle::uniform_points(rng, 12, 3);
  for (const KernelSpec& spec : {KernelSpec::rbf(0.3), KernelSpec::linear()}) {
    const GramMatrix g = gram(spec, x);
    CHECK((g.values() - g.values().transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(g.values());
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
    const Matrix c = cross_kernel(spec, x, x);
    CHECK((c - g.values()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(g(2, 5) == doctest::Approx(k_eval(spec, row_span(x, 2), row_span(x, 5))));
  }
}

TEST_CASE("kernel blocks and subsets") {
  std::mt19937_64 rng(4);
  const FeatureMatrix x = oracle::uniform_points(rng, 6, 2);
  const GramMatrix g = gram(KernelSpec::rbf(1.0), x);
  const std::vector<Index> rows{4, 1};
  const std::vector<Index> cols{0, 5, 2};
  const Matrix b = kernel_block(g.values(), rows, cols);
  CHECK(b.rows() == 2);
  CHECK(b(1, 2) == g(1, 2));
  CHECK(b(0, 1) == g(4, 5));
  const GramMatrix s = g.subset(rows);
  CHECK(s(0, 1) == g(4, 1));
}
