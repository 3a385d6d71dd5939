#include "doctest.h"

#include "cdfsvm/kernels.hpp"
#include "cdfsvm/pairwise_qp.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace cdfsvm;

namespace {

struct Instance {
  Matrix k;
  PairwiseProblem p;
};

Instance random_instance(std::mt19937_64& rng, Index m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 3);
  Instance in;
  const FeatureMatrix x = oracle::uniform_points(rng, m, dim(rng));
  in.k = gram(KernelSpec::rbf(0.2 + u(rng)), x).values();
  in.p.target = oracle::random_labels(rng, m);
  in.p.upper = Vector(m);
  in.p.lower = Vector(m);
  for (Index i = 0; i < m; ++i) {
    in.p.upper[i] = 0.05 + 2.0 * u(rng);
    in.p.lower[i] = -(0.05 + 2.0 * u(rng));
  }
  in.p.epsilon = 0.3 * u(rng);
  return in;
}

}  // namespace

TEST_CASE("matches the projected-gradient oracle on small problems") {
  std::mt19937_64 rng(21);
  PairwiseOptions opt;
  opt.tolerance = 1e-10;
  for (int trial = 0; trial < 40; ++trial) {
    Instance in = random_instance(rng, 2 + trial % 6);
    in.p.kernel = &in.k;
    const PairwiseResult r = solve_pairwise(in.p, opt);
    CHECK(r.converged);
    const auto o = oracle::solve_qp(in.k, in.p.target, in.p.lower, in.p.upper, in.p.epsilon);
    CHECK(std::abs(-r.objective - o.value) < 1e-7);
    CHECK(std::abs(r.a.sum()) < 1e-12);
  }
}

TEST_CASE("two variables against a dense grid") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    Instance in = random_instance(rng, 2);
    in.p.kernel = &in.k;
    PairwiseOptions opt;
    opt.tolerance = 1e-12;
    const PairwiseResult r = solve_pairwise(in.p, opt);
    const auto o = oracle::solve_qp_2(in.k, in.p.target, in.p.lower, in.p.upper, in.p.epsilon);
    CHECK(std::abs(-r.objective - o.value) < 1e-9);
  }
}

TEST_CASE("iterates stay feasible and the objective never decreases") {
  std::mt19937_64 rng(23);
  Instance in = random_instance(rng, 30);
  in.p.kernel = &in.k;
  PairwiseOptions opt;
  opt.record_trace = true;
  opt.tolerance = 1e-8;
  const PairwiseResult r = solve_pairwise(in.p, opt);
  CHECK(r.converged);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] >= r.trace[i - 1] - 1e-12);
  CHECK(std::abs(r.a.sum()) < 1e-10);
  for (Index i = 0; i < r.a.size(); ++i) {
    CHECK(r.a[i] <= in.p.upper[i]);
    CHECK(r.a[i] >= in.p.lower[i]);
  }
  CHECK(r.objective == doctest::Approx(pairwise_objective(in.k, in.p.target, in.p.epsilon, r.a)));
}

TEST_CASE("a wide tube keeps every variable at zero") {
  std::mt19937_64 rng(24);
  Instance in = random_instance(rng, 6);
  in.p.kernel = &in.k;
  in.p.epsilon = 10.0;
  const PairwiseResult r = solve_pairwise(in.p, {});
  CHECK(r.a.isZero());
  CHECK(r.iterations == 0);
}

TEST_CASE("the iteration cap is reported") {
  std::mt19937_64 rng(25);
  Instance in = random_instance(rng, 40);
  in.p.kernel = &in.k;
  in.p.epsilon = 0.0;
  PairwiseOptions opt;
  opt.max_iterations = 1;
  opt.tolerance = 1e-12;
  const PairwiseResult r = solve_pairwise(in.p, opt);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.violation > 0.0);
}

TEST_CASE("invalid problems are rejected") {
  Matrix k = Matrix::Identity(3, 3);
  PairwiseProblem p;
  p.target = Vector::Ones(3);
  p.lower = -Vector::Ones(3);
  p.upper = Vector::Ones(3);
  CHECK_THROWS_AS(solve_pairwise(p, {}), InvalidArgument);
  p.kernel = &k;
  p.upper[1] = -0.5;
  CHECK_THROWS_AS(solve_pairwise(p, {}), InvalidArgument);
  p.upper[1] = 1.0;
  p.epsilon = -1.0;
  CHECK_THROWS_AS(solve_pairwise(p, {}), InvalidArgument);
  p.epsilon = 0.0;
  Matrix small = Matrix::Identity(2, 2);
  p.kernel = &small;
  CHECK_THROWS_AS(solve_pairwise(p, {}), InvalidArgument);
}
