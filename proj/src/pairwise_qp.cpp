#include "cdfsvm/pairwise_qp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace cdfsvm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinCurvature = 1e-12;
constexpr long kRefreshEvery = 2000;

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

struct Violation {
  Index up = -1;
  Index low = -1;
  double min_up = kInf;
  double max_down = -kInf;
};

class Engine {
 public:
  Engine(const PairwiseProblem& p, const PairwiseOptions& o)
      : k_(*p.kernel), t_(p.target), lo_(p.lower), hi_(p.upper), eps_(p.epsilon), opt_(o) {
    const Index m = t_.size();
    a_ = Vector::Zero(m);
    ka_ = Vector::Zero(m);
    diag_ = k_.diagonal();
    down_ = Vector::Constant(m, -kInf);
    unshrink();
  }

  PairwiseResult run() {
    PairwiseResult r;
    long it = 0;
    bool converged = false;
    bool fresh = true;
    const long shrink_every = std::max<long>(20, std::min<long>(a_.size(), 1000) / 4);
    Violation v = scan();
    for (;;) {
      if (done(v)) {
        // Confirm on every variable against a freshly recomputed gradient.
        if (!fresh || shrunk()) {
          unshrink();
          refresh();
          v = scan();
          fresh = true;
        }
        if (done(v)) {
          converged = true;
          break;
        }
      }
      if (it >= opt_.max_iterations) break;
      const Index j = pick_partner(v.up, v.min_up);
      if (j < 0) {
        v = Violation{};
        continue;
      }
      v = step(v.up, j);
      fresh = false;
      ++it;
      if (it % kRefreshEvery == 0) {
        refresh();
        v = scan();
        fresh = true;
      } else if (!opt_.record_trace && it % shrink_every == 0) {
        shrink(v);
        v = scan();
      }
      if (opt_.record_trace) r.trace.push_back(objective());
    }
    unshrink();
    if (!fresh) refresh();
    const Violation fin = scan();
    r.violation = (fin.up < 0 || fin.low < 0) ? 0.0 : std::max(0.0, fin.max_down - fin.min_up);
    r.iterations = it;
    r.converged = converged;
    r.bias = bias(fin);
    r.objective = objective();
    r.a = a_;
    return r;
  }

 private:
  bool done(const Violation& v) const {
    return v.up < 0 || v.low < 0 || v.max_down - v.min_up < opt_.tolerance;
  }
  bool shrunk() const { return static_cast<Index>(active_.size()) < a_.size(); }

  // Ka from the nonzero coefficients only.
  void refresh() {
    ka_.setZero();
    for (Index j = 0; j < a_.size(); ++j) {
      if (a_[j] != 0.0) ka_.noalias() += a_[j] * k_.col(j);
    }
  }

  void unshrink() {
    active_.resize(static_cast<std::size_t>(a_.size()));
    for (Index k = 0; k < a_.size(); ++k) active_[static_cast<std::size_t>(k)] = k;
  }

  // Drops variables that can join no violating pair under the current gradient.
  // Their Ka entries go stale until the next unshrink and refresh.
  void shrink(const Violation& v) {
    std::size_t kept = 0;
    for (const Index k : active_) {
      const bool rise = a_[k] < hi_[k] && up_value(k) < v.max_down;
      const bool fall = down_[k] > v.min_up;
      if (rise || fall) active_[kept++] = k;
    }
    active_.resize(kept);
  }

  double grad(Index i) const { return ka_[i] - t_[i]; }
  double up_value(Index i) const { return grad(i) + (a_[i] >= 0.0 ? eps_ : -eps_); }

  // Optionally applies ka += di K[:,i] + dj K[:,j] on the active set, then finds the
  // maximal violating pair there. Also caches the down value of every active variable
  // that can fall (-inf otherwise).
  Violation scan_update(Index i, double di, Index j, double dj) {
    Violation v;
    double* ka = ka_.data();
    double* down = down_.data();
    const double* a = a_.data();
    const double* t = t_.data();
    const double* lo = lo_.data();
    const double* hi = hi_.data();
    const double* ki = i >= 0 ? k_.col(i).data() : nullptr;
    const double* kj = j >= 0 ? k_.col(j).data() : nullptr;
    const double eps = eps_;
    for (const Index k : active_) {
      if (ki != nullptr) ka[k] += di * ki[k] + dj * kj[k];
      const double g = ka[k] - t[k];
      const double ak = a[k];
      const double u = g + (ak >= 0.0 ? eps : -eps);
      const double d = ak > lo[k] ? g + (ak > 0.0 ? eps : -eps) : -kInf;
      down[k] = d;
      if (ak < hi[k] && u < v.min_up) {
        v.min_up = u;
        v.up = k;
      }
      if (d > v.max_down) {
        v.max_down = d;
        v.low = k;
      }
    }
    return v;
  }
  Violation scan() { return scan_update(-1, 0.0, -1, 0.0); }

  // Second-order choice of the partner that moves down.
  Index pick_partner(Index i, double ui) const {
    const double kii = diag_[i];
    const double* ki = k_.col(i).data();
    const double* down = down_.data();
    const double* diag = diag_.data();
    Index best = -1;
    double best_num = 0.0;
    double best_eta = 1.0;
    for (const Index j : active_) {
      const double diff = down[j] - ui;
      if (!(diff > 0.0) || j == i) continue;
      const double eta = std::max(kii + diag[j] - 2.0 * ki[j], kMinCurvature);
      const double num = diff * diff;
      if (num * best_eta > best_num * eta) {
        best_num = num;
        best_eta = eta;
        best = j;
      }
    }
    return best;
  }

  // Exact minimization of the piecewise quadratic along e_i - e_j.
  Violation step(Index i, Index j) {
    const double ai = a_[i];
    const double aj = a_[j];
    const double room_i = hi_[i] - ai;
    const double room_j = aj - lo_[j];
    const double tmax = std::min(room_i, room_j);
    const double eta = std::max(diag_[i] + diag_[j] - 2.0 * k_(j, i), kMinCurvature);
    const double lin = grad(i) - grad(j);

    std::array<double, 4> pts{};
    std::size_t n = 0;
    pts[n++] = 0.0;
    const double bi = -ai;
    const double bj = aj;
    if (ai < 0.0 && bi < tmax) pts[n++] = bi;
    if (aj > 0.0 && bj < tmax) pts[n++] = bj;
    std::sort(pts.begin() + 1, pts.begin() + static_cast<std::ptrdiff_t>(n));
    pts[n++] = tmax;

    double t = tmax;
    for (std::size_t s = 0; s + 1 < n; ++s) {
      const double t0 = pts[s];
      const double t1 = pts[s + 1];
      if (!(t1 > t0)) continue;
      const double mid = 0.5 * (t0 + t1);
      const double slope = eps_ * sign(ai + mid) - eps_ * sign(aj - mid);
      const double star = -(lin + slope) / eta;
      if (star <= t0) {
        t = t0;
        break;
      }
      if (star < t1) {
        t = star;
        break;
      }
    }

    double new_i = ai + t;
    double new_j = aj - t;
    if (t == tmax) {
      if (room_i <= room_j) new_i = hi_[i];
      if (room_j <= room_i) new_j = lo_[j];
    }
    if (ai < 0.0 && t == bi) new_i = 0.0;
    if (aj > 0.0 && t == bj) new_j = 0.0;

    const double di = new_i - ai;
    const double dj = new_j - aj;
    a_[i] = new_i;
    a_[j] = new_j;
    return scan_update(i, di, j, dj);
  }

  double bias(const Violation& v) const {
    double sum = 0.0;
    long count = 0;
    for (Index i = 0; i < a_.size(); ++i) {
      if (a_[i] != 0.0 && a_[i] > lo_[i] && a_[i] < hi_[i]) {
        sum += -up_value(i);
        ++count;
      }
    }
    if (count > 0) return sum / static_cast<double>(count);
    // Feasible interval is [-min_up, -max_down].
    if (v.up < 0 && v.low < 0) return 0.0;
    if (v.up < 0) return -v.max_down;
    if (v.low < 0) return -v.min_up;
    return -0.5 * (v.min_up + v.max_down);
  }

  double objective() const {
    return t_.dot(a_) - eps_ * a_.cwiseAbs().sum() - 0.5 * a_.dot(ka_);
  }

  const Matrix& k_;
  const Vector& t_;
  const Vector& lo_;
  const Vector& hi_;
  double eps_;
  PairwiseOptions opt_;
  Vector a_;
  Vector ka_;
  Vector diag_;
  Vector down_;
  std::vector<Index> active_;
};

}  // namespace

PairwiseResult solve_pairwise(const PairwiseProblem& problem, const PairwiseOptions& options) {
  if (problem.kernel == nullptr) throw InvalidArgument("pairwise problem has no kernel matrix");
  const Matrix& k = *problem.kernel;
  const Index m = problem.target.size();
  if (m < 2) throw InvalidArgument("pairwise problem needs at least two variables");
  if (k.rows() != m || k.cols() != m) {
    throw InvalidArgument("kernel matrix is " + std::to_string(k.rows()) + "x" +
                          std::to_string(k.cols()) + " but there are " + std::to_string(m) +
                          " variables");
  }
  if (problem.lower.size() != m || problem.upper.size() != m) {
    throw InvalidArgument("box bounds do not match the number of variables");
  }
  if (!(problem.epsilon >= 0.0) || !std::isfinite(problem.epsilon)) {
    throw InvalidArgument("epsilon must be finite and non-negative");
  }
  if (!(options.tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (options.max_iterations < 0) throw InvalidArgument("iteration cap must be non-negative");
  for (Index i = 0; i < m; ++i) {
    if (!(problem.lower[i] <= 0.0 && problem.upper[i] >= 0.0) || !std::isfinite(problem.lower[i]) ||
        !std::isfinite(problem.upper[i])) {
      throw InvalidArgument("box " + std::to_string(i) + " must be finite and contain 0");
    }
  }
  if (!k.allFinite() || !problem.target.allFinite()) {
    throw InvalidArgument("pairwise problem contains non-finite values");
  }
  return Engine(problem, options).run();
}

double pairwise_objective(const Matrix& k, const Vector& target, double epsilon, const Vector& a) {
  return target.dot(a) - epsilon * a.cwiseAbs().sum() - 0.5 * a.dot(k * a);
}

}  // namespace cdfsvm
