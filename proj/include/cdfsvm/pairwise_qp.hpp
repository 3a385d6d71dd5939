#pragma once

#include "cdfsvm/core.hpp"

#include <vector>

namespace cdfsvm {

/// Convex problem solved by pairwise decomposition:
///
///   minimize   0.5 a'Ka - t'a + eps * sum_i |a_i|
///   subject to sum_i a_i = 0,  lower_i <= a_i <= upper_i.
///
/// With t = y and symmetric boxes [-gamma v_i, gamma v_i] this is the negated
/// epsilon-insensitive dual written in a = alpha* - alpha. The caller's boxes must
/// contain 0.
struct PairwiseProblem {
  const Matrix* kernel = nullptr;
  Vector target;
  Vector lower;
  Vector upper;
  double epsilon = 0.0;
};

struct PairwiseOptions {
  /// Stop once the maximal violating pair differs by less than this.
  double tolerance = 1e-3;
  long max_iterations = 100000;
  /// Record the (maximization-form) dual objective after each update.
  bool record_trace = false;
};

struct PairwiseResult {
  Vector a;
  double bias = 0.0;
  /// Dual objective in maximization form, i.e. -F(a).
  double objective = 0.0;
  /// Final maximal KKT violation.
  double violation = 0.0;
  long iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

PairwiseResult solve_pairwise(const PairwiseProblem& problem, const PairwiseOptions& options = {});

/// Maximization-form objective t'a - eps |a|_1 - 0.5 a'Ka.
double pairwise_objective(const Matrix& k, const Vector& target, double epsilon, const Vector& a);

}  // namespace cdfsvm
