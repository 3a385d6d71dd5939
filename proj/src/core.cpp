#include "cdfsvm/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cdfsvm {

ParseError::ParseError(const std::string& message, std::size_t line)
    : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

Scaler::Scaler(Vector lo, Vector hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size()) {
    throw InvalidArgument("scaler bounds have different lengths");
  }
  for (Index k = 0; k < lo_.size(); ++k) {
    if (!std::isfinite(lo_[k]) || !std::isfinite(hi_[k]) || lo_[k] > hi_[k]) {
      throw InvalidArgument("scaler bounds for dimension " + std::to_string(k) + " are invalid");
    }
  }
}

Scaler Scaler::fit(const FeatureMatrix& raw) {
  if (raw.rows() < 1 || raw.cols() < 1) {
    throw InvalidArgument("cannot fit a scaler on an empty matrix");
  }
  if (!raw.allFinite()) {
    throw InvalidArgument("feature matrix contains non-finite values");
  }
  return Scaler(raw.colwise().minCoeff().transpose(), raw.colwise().maxCoeff().transpose());
}

FeatureMatrix Scaler::transform(const FeatureMatrix& raw) const {
  if (raw.cols() != dim()) {
    throw InvalidArgument("scaler has " + std::to_string(dim()) + " dimensions, matrix has " +
                          std::to_string(raw.cols()));
  }
  FeatureMatrix out(raw.rows(), raw.cols());
  for (Index k = 0; k < raw.cols(); ++k) {
    const double lo = lo_[k];
    const double span = hi_[k] - lo_[k];
    for (Index i = 0; i < raw.rows(); ++i) {
      if (is_constant(k)) {
        out(i, k) = 0.5;
      } else {
        // Division rather than multiplication by a reciprocal keeps hi -> 1 exact.
        out(i, k) = std::clamp((raw(i, k) - lo) / span, 0.0, 1.0);
      }
    }
  }
  return out;
}

double Scaler::inverse(Index k, double scaled) const {
  if (is_constant(k)) return lo_[k];
  return lo_[k] + scaled * (hi_[k] - lo_[k]);
}

FeatureMatrix Scaler::inverse(const FeatureMatrix& scaled) const {
  if (scaled.cols() != dim()) {
    throw InvalidArgument("dimension mismatch in inverse scaling");
  }
  FeatureMatrix out(scaled.rows(), scaled.cols());
  for (Index i = 0; i < scaled.rows(); ++i) {
    for (Index k = 0; k < scaled.cols(); ++k) out(i, k) = inverse(k, scaled(i, k));
  }
  return out;
}

Normalized normalize(const FeatureMatrix& raw, const std::optional<Scaler>& scaler) {
  if (raw.rows() < 1) throw InvalidArgument("normalize needs at least one row");
  if (!raw.allFinite()) throw InvalidArgument("feature matrix contains non-finite values");
  Scaler s = scaler ? *scaler : Scaler::fit(raw);
  FeatureMatrix z = s.transform(raw);
  return {std::move(z), std::move(s)};
}

int decide(double score) {
  if (!std::isfinite(score)) throw InvalidArgument("decision score is not finite");
  return score > 0.5 ? 1 : 0;
}

double ingest_label(double raw) {
  if (raw == 1.0) return 1.0;
  if (raw == 0.0 || raw == -1.0) return 0.0;
  throw InvalidArgument("label " + std::to_string(raw) + " is not one of -1, 0, 1");
}

Dataset::Dataset(FeatureMatrix features, Vector labels, Scaler scaler, std::string name)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      scaler_(std::move(scaler)),
      name_(std::move(name)) {
  if (features_.rows() < 2) throw InvalidArgument("a dataset needs at least two samples");
  if (features_.cols() < 1) throw InvalidArgument("a dataset needs at least one feature");
  if (labels_.size() != features_.rows()) {
    throw InvalidArgument("label count does not match sample count");
  }
  if (scaler_.dim() != features_.cols()) {
    throw InvalidArgument("scaler dimension does not match feature dimension");
  }
  for (Index i = 0; i < labels_.size(); ++i) {
    if (labels_[i] != 0.0 && labels_[i] != 1.0) {
      throw InvalidArgument("labels must be 0 or 1");
    }
  }
  if (!features_.allFinite() || features_.minCoeff() < 0.0 || features_.maxCoeff() > 1.0) {
    throw InvalidArgument("dataset features must lie in [0,1]");
  }
}

Index Dataset::count(int label) const {
  return static_cast<Index>((labels_.array() == static_cast<double>(label)).count());
}

void Dataset::require_both_classes(const char* operation) const {
  if (!has_both_classes()) {
    throw InvalidArgument(std::string(operation) + " needs samples from both classes");
  }
}

Dataset Dataset::subset(std::span<const Index> rows) const {
  FeatureMatrix x(static_cast<Index>(rows.size()), dim());
  Vector y(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    x.row(static_cast<Index>(r)) = features_.row(rows[r]);
    y[static_cast<Index>(r)] = labels_[rows[r]];
  }
  return Dataset(std::move(x), std::move(y), scaler_, name_);
}

Dataset make_dataset(const LabeledSamples& samples, std::string name,
                     const std::optional<Scaler>& scaler) {
  Normalized n = normalize(samples.x, scaler);
  Vector y(samples.y.size());
  for (Index i = 0; i < y.size(); ++i) y[i] = ingest_label(samples.y[i]);
  return Dataset(std::move(n.features), std::move(y), std::move(n.scaler), std::move(name));
}

std::vector<Index> iota_indices(Index n) {
  std::vector<Index> out(static_cast<std::size_t>(n));
  std::iota(out.begin(), out.end(), Index{0});
  return out;
}

}  // namespace cdfsvm
