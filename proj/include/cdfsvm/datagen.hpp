#pragma once

#include "cdfsvm/core.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace cdfsvm {

/// Diagonal-covariance Gaussian class-conditional density.
struct GaussianClass {
  Vector mean;
  Vector variances;

  void validate() const;
  double log_density(std::span<const double> x) const;
};

/// Two-class bivariate model: class 1 ~ N(mu, diag(variances)), class 0 ~ N(-mu, same).
struct GaussianSpec2D {
  Vector mu = Eigen::Vector2d{1.0, -2.0};
  Vector variances = Eigen::Vector2d{0.5, 2.0};
  Index n = 200;
  std::uint64_t seed = 1;

  void validate() const;
  GaussianClass positive() const;
  GaussianClass negative() const;
  /// Slope and intercept of the Bayes line x2 = k x1 + q.
  double bayes_slope() const;
  double bayes_intercept() const;
  /// Error of the Bayes rule under equal priors, Phi(-Mahalanobis / 2).
  double bayes_error() const;
};

/// One-dimensional model: class 1 ~ N(-center, variance), class 0 ~ N(center, variance).
struct Robustness1DSpec {
  double center = 3.0;
  double variance = 3.0;
  Index n = 200;
  std::uint64_t seed = 1;

  void validate() const;
  GaussianClass positive() const;
  GaussianClass negative() const;
};

/// Raw samples, first n/2 rows labelled 1 and the rest 0.
LabeledSamples sample_gaussian_2d(const GaussianSpec2D& spec);
LabeledSamples sample_robustness_1d(const Robustness1DSpec& spec);

/// Normalized datasets built from the raw samples.
Dataset gen_gaussian_2d(const GaussianSpec2D& spec);
Dataset gen_robustness_1d(const Robustness1DSpec& spec);

/// p1(x) / (p1(x) + p0(x)) under equal priors, evaluated in log space.
double bayes_posterior(std::span<const double> x, const GaussianClass& positive,
                       const GaussianClass& negative);

/// The logical benchmark rule (a5 = 3 and a4 = 1) or (a5 != 4 and a2 != 3) over six
/// categorical attributes with sizes (3, 3, 2, 3, 4, 2), coded 1..size.
int monk3_rule(std::span<const double> attributes);
/// All 432 attribute combinations with noise-free labels.
LabeledSamples monk3_full();
/// `n` distinct combinations drawn without replacement; a `noise` fraction of them
/// (rounded) get their label flipped.
LabeledSamples monk3_sample(Index n, double noise, std::uint64_t seed);

struct CsvOptions {
  /// Zero-based label column; negative counts from the end (-1 is the last column).
  int label_column = -1;
  /// Token mapped to class 1. Empty: numeric labels follow the {-1,0}->0, 1->1
  /// convention, and two arbitrary numeric values map the larger one to 1.
  std::string positive_label;
  std::optional<Scaler> scaler;
};

/// Raw features and {0,1} labels; the header row (if any) is detected automatically.
LabeledSamples read_csv(const std::string& path, const CsvOptions& options = {});
Dataset load_csv(const std::string& path, const CsvOptions& options = {});
/// Parses CSV text held in memory; `source` names it in error messages.
LabeledSamples parse_csv(const std::string& text, const CsvOptions& options = {},
                         const std::string& source = "<memory>");

/// Comma-separated features followed by the label; full round-trip precision.
std::string format_csv(const FeatureMatrix& x, const Vector& y, bool header = true);

}  // namespace cdfsvm
