#pragma once

#include "cdfsvm/core.hpp"
#include "cdfsvm/distribution.hpp"
#include "cdfsvm/kernels.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace cdfsvm {

enum class Method { csvm, lssvm, vsvm, idlssvm, eps_l1svm, eps_l1vsvm };

std::string to_string(Method method);
/// Accepts the hyphenated CLI names (eps-l1vsvm) as well as underscores.
Method parse_method(const std::string& text);
const std::vector<Method>& all_methods();
bool uses_epsilon(Method method);
/// True for the methods whose fit consumes a v-vector or V-matrix.
bool uses_weights(Method method);

struct SolverConfig {
  double gamma = 1.0;
  double epsilon = 0.0;
  double tolerance = 1e-3;
  long max_iterations = 100000;
  std::uint64_t seed = 0;
  bool record_trace = false;

  void validate() const;
};

/// f(x) = sum_i coefficients_i K(support_i, x) + offset.
struct ScoreModel {
  Method method = Method::lssvm;
  KernelSpec kernel;
  FeatureMatrix support;
  Vector coefficients;
  double offset = 0.0;
  double gamma = 1.0;

  Vector scores(const FeatureMatrix& x) const;
};

/// Output of the pairwise engine. coefficients = alpha* - alpha.
struct DualModel : ScoreModel {
  Vector caps;
  double epsilon = 0.0;
  bool converged = false;
  long iterations = 0;
  double objective = 0.0;
  double violation = 0.0;
  std::vector<double> trace;
  std::string weights;

  Vector alpha() const { return (-coefficients).cwiseMax(0.0); }
  Vector alpha_star() const { return coefficients.cwiseMax(0.0); }
};

struct ClosedFormModel : ScoreModel {
  /// Relative residual of the defining linear system.
  double residual = 0.0;
  std::string weights;
};

using Model = std::variant<DualModel, ClosedFormModel>;

const ScoreModel& base(const Model& model);

// Matrix-level entry points used by cross-validation on precomputed blocks.

struct DualSolution {
  Vector coefficients;
  double bias = 0.0;
  Vector caps;
  bool converged = false;
  long iterations = 0;
  double objective = 0.0;
  double violation = 0.0;
  std::vector<double> trace;
};

/// Weighted epsilon-insensitive dual with boxes |a_i| <= gamma v_i.
DualSolution solve_eps_l1(const Matrix& k, const Vector& y, const Vector& v,
                          const SolverConfig& cfg);
/// Hinge-loss dual on labels 2y-1, returned already mapped to the 0.5 threshold.
DualSolution solve_csvm(const Matrix& k, const Vector& y, const SolverConfig& cfg);

struct LinearSolution {
  Vector coefficients;
  double offset = 0.0;
  double residual = 0.0;
};

LinearSolution solve_vsvm(const Matrix& k, const Matrix& v, const Vector& y, double gamma);
LinearSolution solve_lssvm(const Matrix& k, const Vector& y, double gamma);
/// LSSVM with per-sample regularization (K + diag(1 / (gamma rho))).
LinearSolution solve_weighted_lssvm(const Matrix& k, const Vector& y, const Vector& rho,
                                    double gamma);
/// exp(-mean squared distance to the k nearest same-class neighbours / d).
Vector density_weights(const FeatureMatrix& x, const Vector& y, int neighbours = 5);

/// Maximization-form dual objective of the weighted epsilon-insensitive problem.
double eps_l1_dual_objective(const Matrix& k, const Vector& y, double epsilon, const Vector& a);
/// (KA + c1 - Y)' V (KA + c1 - Y) + gamma A'KA.
double vsvm_objective(const Matrix& k, const Matrix& v, const Vector& y, double gamma,
                      const Vector& a, double c);

// Dataset-level fits.

DualModel fit_eps_l1_vsvm(const Dataset& data, const GramMatrix& k, const VWeights& v,
                          const SolverConfig& cfg);
DualModel fit_eps_l1_svm(const Dataset& data, const GramMatrix& k, const SolverConfig& cfg);
DualModel fit_csvm(const Dataset& data, const GramMatrix& k, double gamma,
                   const SolverConfig& cfg = {});
ClosedFormModel fit_vsvm(const Dataset& data, const GramMatrix& k, const VMatrix& v, double gamma);
ClosedFormModel fit_lssvm(const Dataset& data, const GramMatrix& k, double gamma);
ClosedFormModel fit_idlssvm(const Dataset& data, const GramMatrix& k, double gamma,
                            int neighbours = 5);

Vector predict(const Model& model, const FeatureMatrix& x);
Vector predict(const ScoreModel& model, const FeatureMatrix& x);
std::vector<int> decide_all(const Vector& scores);

}  // namespace cdfsvm
