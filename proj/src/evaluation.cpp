#include "cdfsvm/evaluation.hpp"

#include <cmath>
#include <numeric>

namespace cdfsvm {

namespace {

void check_pair(std::span<const int> a, std::span<const int> b) {
  if (a.empty()) throw InvalidArgument("metric needs at least one prediction");
  if (a.size() != b.size()) {
    throw InvalidArgument("label vectors have lengths " + std::to_string(a.size()) + " and " +
                          std::to_string(b.size()));
  }
}

}  // namespace

Confusion confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  check_pair(y_true, y_pred);
  Confusion c;
  for (std::size_t t = 0; t < y_true.size(); ++t) {
    const bool truth = y_true[t] == 1;
    const bool pred = y_pred[t] == 1;
    if (truth && pred) ++c.tp;
    if (!truth && pred) ++c.fp;
    if (!truth && !pred) ++c.tn;
    if (truth && !pred) ++c.fn;
  }
  return c;
}

double accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
  check_pair(y_true, y_pred);
  long hits = 0;
  for (std::size_t t = 0; t < y_true.size(); ++t) hits += y_true[t] == y_pred[t] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

double vac(std::span<const int> y_true, std::span<const int> y_pred, std::span<const double> v) {
  check_pair(y_true, y_pred);
  if (v.size() != y_true.size()) {
    throw InvalidArgument("vac needs one weight per test sample");
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < y_true.size(); ++t) {
    if (!(v[t] > 0.0)) throw InvalidArgument("vac weights must be positive");
    if (y_true[t] == y_pred[t]) sum += v[t];
  }
  return sum / static_cast<double>(y_true.size());
}

double gmean(std::span<const int> y_true, std::span<const int> y_pred) {
  const Confusion c = confusion(y_true, y_pred);
  if (c.tp + c.fn == 0 || c.tn + c.fp == 0) return 0.0;
  const double sens = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  const double spec = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
  return std::sqrt(sens * spec);
}

std::vector<int> to_labels(const Vector& y) {
  std::vector<int> out(static_cast<std::size_t>(y.size()));
  for (Index i = 0; i < y.size(); ++i) out[static_cast<std::size_t>(i)] = y[i] == 1.0 ? 1 : 0;
  return out;
}

EvalReport evaluate(std::span<const int> y_true, std::span<const int> y_pred,
                    std::span<const double> v, std::string v_provenance) {
  EvalReport r;
  r.confusion = confusion(y_true, y_pred);
  const Confusion& c = r.confusion;
  r.acc = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  r.sensitivity = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  r.specificity = c.tn + c.fp > 0 ? static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp) : 0.0;
  r.gmean = gmean(y_true, y_pred);
  if (!v.empty()) r.vac = vac(y_true, y_pred, v);
  r.v_provenance = std::move(v_provenance);
  return r;
}

BoundaryLine boundary_from_weights(double w1, double w2, double b, const Scaler& scaler,
                                   double threshold) {
  if (!std::isfinite(w1) || !std::isfinite(w2) || !std::isfinite(b)) {
    throw InvalidArgument("boundary weights are not finite");
  }
  if (std::abs(w2) <= 1e-12 * std::max(1.0, std::abs(w1))) {
    throw InvalidArgument("boundary is vertical: the weight on x2 is zero");
  }
  if (scaler.dim() == 0) return {-w1 / w2, (threshold - b) / w2};
  if (scaler.dim() != 2) throw InvalidArgument("boundary extraction needs a 2-D scaler");
  if (scaler.is_constant(0) || scaler.is_constant(1)) {
    throw InvalidArgument("boundary extraction needs both dimensions to vary");
  }
  // Scaled coordinates z_k = (x_k - lo_k) / s_k.
  const double s1 = scaler.hi()[0] - scaler.lo()[0];
  const double s2 = scaler.hi()[1] - scaler.lo()[1];
  const double lo1 = scaler.lo()[0];
  const double lo2 = scaler.lo()[1];
  BoundaryLine line;
  line.k = -(w1 / s1) * s2 / w2;
  line.q = lo2 + s2 / w2 * (threshold - b + w1 * lo1 / s1);
  return line;
}

BoundaryLine boundary_from_linear(const ScoreModel& model, const Scaler& scaler, double threshold) {
  if (model.kernel.kind != KernelSpec::Kind::linear) {
    throw InvalidArgument("boundary extraction needs a linear kernel");
  }
  if (model.support.cols() != 2) throw InvalidArgument("boundary extraction needs 2-D inputs");
  const Vector w = model.support.transpose() * model.coefficients;
  return boundary_from_weights(w[0], w[1], model.offset, scaler, threshold);
}

double mean(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("mean of an empty sequence");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double mu = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double dist_to_bayes(std::span<const double> ks, std::span<const double> qs, double k0, double q0) {
  if (ks.size() < 2 || qs.size() < 2) throw InvalidArgument("distance needs at least two runs");
  if (ks.size() != qs.size()) throw InvalidArgument("slope and intercept counts differ");
  return std::abs(mean(ks) - k0) * sample_sd(ks) + std::abs(mean(qs) - q0) * sample_sd(qs);
}

}  // namespace cdfsvm
