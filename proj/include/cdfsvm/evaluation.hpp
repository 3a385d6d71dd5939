#pragma once

#include "cdfsvm/core.hpp"
#include "cdfsvm/solvers.hpp"

#include <span>
#include <string>
#include <vector>

namespace cdfsvm {

struct Confusion {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;

  long total() const { return tp + fp + tn + fn; }
};

struct EvalReport {
  double acc = 0.0;
  double vac = 0.0;
  double gmean = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  Confusion confusion;
  std::string v_provenance;
};

Confusion confusion(std::span<const int> y_true, std::span<const int> y_pred);
double accuracy(std::span<const int> y_true, std::span<const int> y_pred);
/// (1/T) sum_t [y_t == yhat_t] v_t.
double vac(std::span<const int> y_true, std::span<const int> y_pred, std::span<const double> v);
/// sqrt(sensitivity * specificity); 0 when either class is missing from y_true.
double gmean(std::span<const int> y_true, std::span<const int> y_pred);

/// Labels stored as 0.0/1.0 reals, converted for the metric functions.
std::vector<int> to_labels(const Vector& y);

/// All metrics at once. `v` may be empty, in which case vac is left at 0.
EvalReport evaluate(std::span<const int> y_true, std::span<const int> y_pred,
                    std::span<const double> v = {}, std::string v_provenance = {});

/// x2 = k x1 + q.
struct BoundaryLine {
  double k = 0.0;
  double q = 0.0;
};

/// Threshold line of a 2-D model with a linear kernel, mapped back to the raw
/// coordinates through `scaler`. An empty scaler means the identity map.
BoundaryLine boundary_from_linear(const ScoreModel& model, const Scaler& scaler = {},
                                  double threshold = 0.5);
/// Same for an explicit weight vector and offset: w . x + b = threshold.
BoundaryLine boundary_from_weights(double w1, double w2, double b, const Scaler& scaler = {},
                                   double threshold = 0.5);

/// |mean(k) - k0| sd(k) + |mean(q) - q0| sd(q), sample standard deviations.
double dist_to_bayes(std::span<const double> ks, std::span<const double> qs, double k0 = 2.0,
                     double q0 = 0.0);

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_sd(std::span<const double> x);

}  // namespace cdfsvm
