#include "cdfsvm/solvers.hpp"

#include "cdfsvm/pairwise_qp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cdfsvm {

namespace {

constexpr double kResidualLimit = 1e-8;
constexpr double kCapSlack = 1e-9;

void require_labels(const Vector& y, bool both) {
  bool zero = false;
  bool one = false;
  for (Index i = 0; i < y.size(); ++i) {
    if (y[i] == 0.0) {
      zero = true;
    } else if (y[i] == 1.0) {
      one = true;
    } else {
      throw InvalidArgument("labels must be 0 or 1");
    }
  }
  if (both && !(zero && one)) throw InvalidArgument("fit needs samples from both classes");
}

void require_square(const Matrix& k, Index m, const char* what) {
  if (k.rows() != m || k.cols() != m) {
    throw InvalidArgument(std::string(what) + " is " + std::to_string(k.rows()) + "x" +
                          std::to_string(k.cols()) + " but there are " + std::to_string(m) +
                          " samples");
  }
}

PairwiseOptions options_from(const SolverConfig& cfg) {
  PairwiseOptions o;
  o.tolerance = cfg.tolerance;
  o.max_iterations = cfg.max_iterations;
  o.record_trace = cfg.record_trace;
  return o;
}

void check_dual(const DualSolution& s) {
  const double total = s.coefficients.sum();
  const double scale = std::max(1.0, s.caps.cwiseAbs().maxCoeff());
  if (std::abs(total) > 1e-10 * scale * static_cast<double>(s.coefficients.size())) {
    throw SolverError("equality constraint drifted to " + std::to_string(total));
  }
  for (Index i = 0; i < s.coefficients.size(); ++i) {
    if (std::abs(s.coefficients[i]) > s.caps[i] + kCapSlack) {
      throw SolverError("coefficient " + std::to_string(i) + " left its box");
    }
  }
}

double relative(double num, double den) { return num / std::max(den, 1.0); }

template <typename Solver>
Vector refined_solve(const Solver& solver, const Matrix& m, const Vector& rhs) {
  Vector x = solver.solve(rhs);
  const Vector r = rhs - m * x;
  x += solver.solve(r);
  return x;
}

LinearSolution bordered_solve(const Matrix& h, const Vector& y) {
  const Index m = y.size();
  const Vector ones = Vector::Ones(m);
  Vector eta;
  Vector nu;
  Eigen::LLT<Matrix> llt(h);
  if (llt.info() == Eigen::Success) {
    eta = refined_solve(llt, h, ones);
    nu = refined_solve(llt, h, y);
  } else {
    Eigen::PartialPivLU<Matrix> lu(h);
    const double rc = lu.rcond();
    if (!(rc > 1e-15)) {
      throw SolverError("bordered system is singular (reciprocal condition " + std::to_string(rc) +
                        ")");
    }
    eta = refined_solve(lu, h, ones);
    nu = refined_solve(lu, h, y);
  }
  const double den = eta.sum();
  if (!(std::abs(den) > 0.0) || !std::isfinite(den)) {
    throw SolverError("bordered system has a degenerate bias row");
  }
  LinearSolution s;
  s.offset = nu.sum() / den;
  s.coefficients = nu - s.offset * eta;
  const Vector r = h * s.coefficients + Vector::Constant(m, s.offset) - y;
  s.residual = relative(r.norm() + std::abs(s.coefficients.sum()), y.norm());
  if (!(s.residual < kResidualLimit)) {
    throw SolverError("bordered system residual " + std::to_string(s.residual) +
                      " exceeds the limit");
  }
  return s;
}

template <typename M>
void fill_base(M& model, Method method, const Dataset& data, const GramMatrix& k, double gamma) {
  model.method = method;
  model.kernel = k.spec();
  model.support = data.features();
  model.gamma = gamma;
}

DualModel to_model(DualSolution s, Method method, const Dataset& data, const GramMatrix& k,
                   double gamma, double epsilon) {
  DualModel m;
  fill_base(m, method, data, k, gamma);
  m.coefficients = std::move(s.coefficients);
  m.offset = s.bias;
  m.caps = std::move(s.caps);
  m.epsilon = epsilon;
  m.converged = s.converged;
  m.iterations = s.iterations;
  m.objective = s.objective;
  m.violation = s.violation;
  m.trace = std::move(s.trace);
  return m;
}

ClosedFormModel to_model(LinearSolution s, Method method, const Dataset& data, const GramMatrix& k,
                         double gamma) {
  ClosedFormModel m;
  fill_base(m, method, data, k, gamma);
  m.coefficients = std::move(s.coefficients);
  m.offset = s.offset;
  m.residual = s.residual;
  return m;
}

void check_gram(const Dataset& data, const GramMatrix& k) {
  require_square(k.values(), data.size(), "Gram matrix");
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::csvm: return "csvm";
    case Method::lssvm: return "lssvm";
    case Method::vsvm: return "vsvm";
    case Method::idlssvm: return "idlssvm";
    case Method::eps_l1svm: return "eps-l1svm";
    case Method::eps_l1vsvm: return "eps-l1vsvm";
  }
  return "?";
}

Method parse_method(const std::string& text) {
  std::string t = text;
  std::replace(t.begin(), t.end(), '_', '-');
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  for (Method m : all_methods()) {
    if (to_string(m) == t) return m;
  }
  throw InvalidArgument("unknown method '" + text +
                        "' (expected csvm, lssvm, vsvm, idlssvm, eps-l1svm or eps-l1vsvm)");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::csvm,      Method::lssvm,
                                           Method::vsvm,      Method::idlssvm,
                                           Method::eps_l1svm, Method::eps_l1vsvm};
  return methods;
}

bool uses_epsilon(Method method) {
  return method == Method::eps_l1svm || method == Method::eps_l1vsvm;
}

bool uses_weights(Method method) {
  return method == Method::vsvm || method == Method::eps_l1vsvm;
}

void SolverConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("epsilon must be non-negative");
  }
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (max_iterations < 0) throw InvalidArgument("max_iterations must be non-negative");
}

Vector ScoreModel::scores(const FeatureMatrix& x) const {
  if (x.cols() != support.cols()) {
    throw InvalidArgument("model was trained on " + std::to_string(support.cols()) +
                          " features, got " + std::to_string(x.cols()));
  }
  if (kernel.kind == KernelSpec::Kind::linear) {
    const Vector w = support.transpose() * coefficients;
    return (x * w).array() + offset;
  }
  return (cross_kernel(kernel, x, support) * coefficients).array() + offset;
}

const ScoreModel& base(const Model& model) {
  return std::visit([](const auto& m) -> const ScoreModel& { return m; }, model);
}

DualSolution solve_eps_l1(const Matrix& k, const Vector& y, const Vector& v,
                          const SolverConfig& cfg) {
  cfg.validate();
  const Index m = y.size();
  require_square(k, m, "kernel matrix");
  require_labels(y, true);
  if (v.size() != m) throw InvalidArgument("v-vector length does not match the sample count");
  for (Index i = 0; i < m; ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      throw InvalidArgument("v-vector entry " + std::to_string(i) + " is not positive");
    }
  }
  PairwiseProblem p;
  p.kernel = &k;
  p.target = y;
  p.upper = cfg.gamma * v;
  p.lower = -p.upper;
  p.epsilon = cfg.epsilon;
  PairwiseResult r = solve_pairwise(p, options_from(cfg));
  DualSolution s;
  s.coefficients = std::move(r.a);
  s.bias = r.bias;
  s.caps = p.upper;
  s.converged = r.converged;
  s.iterations = r.iterations;
  s.objective = r.objective;
  s.violation = r.violation;
  s.trace = std::move(r.trace);
  check_dual(s);
  return s;
}

DualSolution solve_csvm(const Matrix& k, const Vector& y, const SolverConfig& cfg) {
  cfg.validate();
  const Index m = y.size();
  require_square(k, m, "kernel matrix");
  require_labels(y, true);
  PairwiseProblem p;
  p.kernel = &k;
  p.target = 2.0 * y.array() - 1.0;
  p.lower.resize(m);
  p.upper.resize(m);
  for (Index i = 0; i < m; ++i) {
    p.lower[i] = y[i] == 1.0 ? 0.0 : -cfg.gamma;
    p.upper[i] = y[i] == 1.0 ? cfg.gamma : 0.0;
  }
  p.epsilon = 0.0;
  PairwiseResult r = solve_pairwise(p, options_from(cfg));
  DualSolution s;
  // The +-1 score g maps to (g + 1) / 2 so that g > 0 iff the score exceeds 0.5.
  s.coefficients = 0.5 * r.a;
  s.bias = 0.5 * (r.bias + 1.0);
  s.caps = Vector::Constant(m, 0.5 * cfg.gamma);
  s.converged = r.converged;
  s.iterations = r.iterations;
  s.objective = r.objective;
  s.violation = r.violation;
  s.trace = std::move(r.trace);
  check_dual(s);
  return s;
}

LinearSolution solve_vsvm(const Matrix& k, const Matrix& v, const Vector& y, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be positive");
  const Index m = y.size();
  require_square(k, m, "kernel matrix");
  require_square(v, m, "V-matrix");
  require_labels(y, false);
  const Matrix sys = v * k + gamma * Matrix::Identity(m, m);
  Eigen::PartialPivLU<Matrix> lu(sys);
  const double rc = lu.rcond();
  if (!(rc > 1e-15)) {
    throw SolverError("VK + gamma I is singular (reciprocal condition " + std::to_string(rc) + ")");
  }
  const Vector ones = Vector::Ones(m);
  const Vector rhs_b = v * y;
  const Vector rhs_c = v * ones;
  const Vector ab = refined_solve(lu, sys, rhs_b);
  const Vector ac = refined_solve(lu, sys, rhs_c);
  const double res_b = relative((sys * ab - rhs_b).norm(), rhs_b.norm());
  const double res_c = relative((sys * ac - rhs_c).norm(), rhs_c.norm());
  const double residual = std::max(res_b, res_c);
  if (!(residual < kResidualLimit)) {
    std::ostringstream os;
    os << "VSVM system residual " << residual << " exceeds the limit (reciprocal condition " << rc
       << ")";
    throw SolverError(os.str());
  }
  const double num = ones.dot(v * (k * ab - y));
  const double den = ones.dot(v * (k * ac - ones));
  if (!(std::abs(den) > 0.0) || !std::isfinite(den)) {
    throw SolverError("VSVM offset denominator vanished");
  }
  LinearSolution s;
  s.offset = num / den;
  s.coefficients = ab - s.offset * ac;
  s.residual = residual;
  return s;
}

LinearSolution solve_lssvm(const Matrix& k, const Vector& y, double gamma) {
  return solve_weighted_lssvm(k, y, Vector::Ones(y.size()), gamma);
}

LinearSolution solve_weighted_lssvm(const Matrix& k, const Vector& y, const Vector& rho,
                                    double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be positive");
  const Index m = y.size();
  require_square(k, m, "kernel matrix");
  require_labels(y, true);
  if (rho.size() != m) throw InvalidArgument("density weights do not match the sample count");
  if (!((rho.array() > 0.0).all()) || !rho.allFinite()) {
    throw InvalidArgument("density weights must be positive");
  }
  Matrix h = k;
  h.diagonal().array() += 1.0 / (gamma * rho.array());
  return bordered_solve(h, y);
}

Vector density_weights(const FeatureMatrix& x, const Vector& y, int neighbours) {
  if (neighbours < 1) throw InvalidArgument("neighbour count must be positive");
  const Index m = x.rows();
  if (y.size() != m) throw InvalidArgument("label count does not match sample count");
  const auto d = static_cast<double>(x.cols());
  Vector rho(m);
  std::vector<double> dist;
  for (Index i = 0; i < m; ++i) {
    dist.clear();
    for (Index j = 0; j < m; ++j) {
      if (j != i && y[j] == y[i]) dist.push_back((x.row(i) - x.row(j)).squaredNorm());
    }
    if (static_cast<long>(dist.size()) < neighbours) {
      throw InvalidArgument("class " + std::to_string(static_cast<int>(y[i])) + " has " +
                            std::to_string(dist.size() + 1) + " samples; density weights need " +
                            std::to_string(neighbours + 1));
    }
    const auto kth = dist.begin() + neighbours;
    std::partial_sort(dist.begin(), kth, dist.end());
    double mean = 0.0;
    for (auto it = dist.begin(); it != kth; ++it) mean += *it;
    mean /= static_cast<double>(neighbours);
    rho[i] = std::exp(-mean / d);
  }
  return rho;
}

double eps_l1_dual_objective(const Matrix& k, const Vector& y, double epsilon, const Vector& a) {
  return pairwise_objective(k, y, epsilon, a);
}

double vsvm_objective(const Matrix& k, const Matrix& v, const Vector& y, double gamma,
                      const Vector& a, double c) {
  const Vector r = (k * a).array() + c - y.array();
  return r.dot(v * r) + gamma * a.dot(k * a);
}

DualModel fit_eps_l1_vsvm(const Dataset& data, const GramMatrix& k, const VWeights& v,
                          const SolverConfig& cfg) {
  check_gram(data, k);
  data.require_both_classes("fit_eps_l1_vsvm");
  DualModel m = to_model(solve_eps_l1(k.values(), data.labels(), v.values, cfg),
                         Method::eps_l1vsvm, data, k, cfg.gamma, cfg.epsilon);
  m.weights = v.provenance();
  return m;
}

DualModel fit_eps_l1_svm(const Dataset& data, const GramMatrix& k, const SolverConfig& cfg) {
  check_gram(data, k);
  data.require_both_classes("fit_eps_l1_svm");
  return to_model(solve_eps_l1(k.values(), data.labels(), Vector::Ones(data.size()), cfg),
                  Method::eps_l1svm, data, k, cfg.gamma, cfg.epsilon);
}

DualModel fit_csvm(const Dataset& data, const GramMatrix& k, double gamma, const SolverConfig& cfg) {
  check_gram(data, k);
  data.require_both_classes("fit_csvm");
  SolverConfig c = cfg;
  c.gamma = gamma;
  c.epsilon = 0.0;
  return to_model(solve_csvm(k.values(), data.labels(), c), Method::csvm, data, k, gamma, 0.0);
}

ClosedFormModel fit_vsvm(const Dataset& data, const GramMatrix& k, const VMatrix& v, double gamma) {
  check_gram(data, k);
  ClosedFormModel m =
      to_model(solve_vsvm(k.values(), v.values, data.labels(), gamma), Method::vsvm, data, k, gamma);
  m.weights = "G=" + v.g.describe() + ";mu=" + v.mu.describe() + ";combine=" + to_string(v.combine);
  return m;
}

ClosedFormModel fit_lssvm(const Dataset& data, const GramMatrix& k, double gamma) {
  check_gram(data, k);
  data.require_both_classes("fit_lssvm");
  return to_model(solve_lssvm(k.values(), data.labels(), gamma), Method::lssvm, data, k, gamma);
}

ClosedFormModel fit_idlssvm(const Dataset& data, const GramMatrix& k, double gamma,
                            int neighbours) {
  check_gram(data, k);
  data.require_both_classes("fit_idlssvm");
  const Vector rho = density_weights(data.features(), data.labels(), neighbours);
  return to_model(solve_weighted_lssvm(k.values(), data.labels(), rho, gamma), Method::idlssvm,
                  data, k, gamma);
}

Vector predict(const ScoreModel& model, const FeatureMatrix& x) { return model.scores(x); }

Vector predict(const Model& model, const FeatureMatrix& x) { return base(model).scores(x); }

std::vector<int> decide_all(const Vector& scores) {
  std::vector<int> out(static_cast<std::size_t>(scores.size()));
  for (Index i = 0; i < scores.size(); ++i) out[static_cast<std::size_t>(i)] = decide(scores[i]);
  return out;
}

}  // namespace cdfsvm
