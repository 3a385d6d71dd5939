#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdfsvm {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
/// Samples are stored one per row so that every row is a contiguous span.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

inline std::span<const double> row_span(const FeatureMatrix& x, Index i) {
  return {x.data() + i * x.cols(), static_cast<std::size_t>(x.cols())};
}

/// Per-dimension min-max map onto [0,1]. Dimensions with lo == hi are constant
/// and map to 0.5.
class Scaler {
 public:
  Scaler() = default;
  Scaler(Vector lo, Vector hi);

  static Scaler fit(const FeatureMatrix& raw);

  Index dim() const { return lo_.size(); }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  bool is_constant(Index k) const { return !(lo_[k] < hi_[k]); }

  /// Values outside [lo, hi] are clipped to [0,1].
  FeatureMatrix transform(const FeatureMatrix& raw) const;
  FeatureMatrix inverse(const FeatureMatrix& scaled) const;
  double inverse(Index k, double scaled) const;

  friend bool operator==(const Scaler& a, const Scaler& b) {
    return a.lo_.size() == b.lo_.size() && a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  Vector lo_;
  Vector hi_;
};

struct Normalized {
  FeatureMatrix features;
  Scaler scaler;
};

/// Fits a scaler over the whole matrix unless one is supplied.
Normalized normalize(const FeatureMatrix& raw, const std::optional<Scaler>& scaler = std::nullopt);

/// Class decision on a conditional-probability score: 1 iff score > 0.5.
int decide(double score);

/// Maps an external label onto {0,1}: -1 and 0 become 0, +1 becomes 1.
double ingest_label(double raw);

/// Features in [0,1]^d, labels in {0,1}, and the scaler that produced them.
/// Immutable after construction.
class Dataset {
 public:
  Dataset(FeatureMatrix features, Vector labels, Scaler scaler, std::string name = {});

  const FeatureMatrix& features() const { return features_; }
  const Vector& labels() const { return labels_; }
  const Scaler& scaler() const { return scaler_; }
  const std::string& name() const { return name_; }

  Index size() const { return features_.rows(); }
  Index dim() const { return features_.cols(); }
  Index count(int label) const;
  bool has_both_classes() const { return count(0) > 0 && count(1) > 0; }

  /// Throws InvalidArgument unless both classes are present.
  void require_both_classes(const char* operation) const;

  Dataset subset(std::span<const Index> rows) const;

 private:
  FeatureMatrix features_;
  Vector labels_;
  Scaler scaler_;
  std::string name_;
};

/// Raw labelled samples before normalization.
struct LabeledSamples {
  FeatureMatrix x;
  Vector y;
};

Dataset make_dataset(const LabeledSamples& samples, std::string name = {},
                     const std::optional<Scaler>& scaler = std::nullopt);

std::vector<Index> iota_indices(Index n);

}  // namespace cdfsvm
