#pragma once

#include "cdfsvm/core.hpp"

#include <functional>
#include <random>

namespace oracle {

using cdfsvm::Matrix;
using cdfsvm::Vector;

/// min 0.5 a'Ka - t'a + eps |a|_1  s.t.  sum a = 0, lo <= a <= hi.
struct QpSolution {
  Vector a;
  double value = 0.0;
};

double qp_value(const Matrix& k, const Vector& t, double eps, const Vector& a);

/// Accelerated projected gradient on the split a = p - q, then an exact
/// equality-constrained solve on the detected active set when that is feasible.
QpSolution solve_qp(const Matrix& k, const Vector& t, const Vector& lo, const Vector& hi, double eps,
                    int iterations = 20000);

/// Two variables: a = (s, -s). Dense grid over s followed by ternary refinement.
QpSolution solve_qp_2(const Matrix& k, const Vector& t, const Vector& lo, const Vector& hi,
                      double eps, int grid = 20001);

/// Composite midpoint rule.
double midpoint(const std::function<double(double)>& f, double a, double b, int n);

/// Central-difference gradient.
Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h);

cdfsvm::FeatureMatrix uniform_points(std::mt19937_64& rng, cdfsvm::Index m, cdfsvm::Index d);
/// Random {0,1} labels containing both classes.
Vector random_labels(std::mt19937_64& rng, cdfsvm::Index m);

}  // namespace oracle
