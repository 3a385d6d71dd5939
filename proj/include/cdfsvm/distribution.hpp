#pragma once

#include "cdfsvm/core.hpp"
#include "cdfsvm/kernels.hpp"

#include <span>
#include <string>

namespace cdfsvm {

/// The measure mu over which G is integrated.
///
/// uniform_box: independent uniform on [center_k - half_width_k, center_k + half_width_k].
/// gaussian:    independent normal with per-dimension mean and standard deviation.
/// empirical:   the ECDF of a reference sample (one point per row).
/// point_mass:  the degenerate measure sitting on the evaluated point itself, so
///              every weight equals G(0) = 1.
struct MeasureSpec {
  enum class Kind { uniform_box, gaussian, empirical, point_mass };

  Kind kind = Kind::point_mass;
  Vector center;
  Vector half_width;
  Vector mean;
  Vector stddev;
  FeatureMatrix references;

  static MeasureSpec uniform_box(Vector center, Vector half_width);
  /// [0,1]^d, i.e. center 0.5 and half width 0.5 in every dimension.
  static MeasureSpec unit_box(Index d);
  static MeasureSpec gaussian(Vector mean, Vector stddev);
  /// Maximum-likelihood normal fit per dimension. Zero-variance dimensions get
  /// stddev 1, which only rescales all weights uniformly.
  static MeasureSpec gaussian_fit(const FeatureMatrix& x);
  static MeasureSpec empirical(FeatureMatrix references);
  static MeasureSpec point_mass();

  /// Throws InvalidArgument when parameters are degenerate or do not match `d`.
  void validate(Index d) const;
  std::string describe() const;
};

enum class Combine { product, additive };

std::string to_string(MeasureSpec::Kind kind);
std::string to_string(Combine combine);
MeasureSpec::Kind parse_measure_kind(const std::string& text);
Combine parse_combine(const std::string& text);

/// Standard normal CDF.
double normal_cdf(double z);

/// Product over dimensions of Phi((x^k - a_k) / b_k) for a gaussian measure
/// with the step kernel.
double v_gaussian_step(const MeasureSpec& mu, std::span<const double> x);

/// Exact box average of a Gaussian G: per dimension
/// (sigma sqrt(2 pi) / (4a)) [erf((a - x) / (sigma sqrt 2)) + erf((a + x) / (sigma sqrt 2))]
/// in box-centered coordinates, combined over dimensions.
double v_uniform_gaussian(const MeasureSpec& mu, const GKernelSpec& g, std::span<const double> x,
                          Combine combine = Combine::product);

/// (1/N) sum_s G(xhat_s - x) over the reference sample.
double v_empirical(const MeasureSpec& mu, const GKernelSpec& g, std::span<const double> x,
                   Combine combine = Combine::product);

/// Unnormalized weight integral for any (G, mu) pair.
double v_raw(const GKernelSpec& g, const MeasureSpec& mu, std::span<const double> x,
             Combine combine = Combine::product);

struct VWeights {
  Vector values;
  Combine combine = Combine::product;
  GKernelSpec g;
  MeasureSpec mu;
  /// Raw integrals are divided by this constant.
  double scale = 1.0;

  std::string provenance() const;
};

/// Weights for every row of `samples`. With `normalize`, the largest weight is 1.
VWeights v_vector(const FeatureMatrix& samples, const GKernelSpec& g, const MeasureSpec& mu,
                  Combine combine = Combine::product, bool normalize = true);

/// Out-of-sample weights sharing the (G, mu, scale) of `fitted`.
Vector v_values(const VWeights& fitted, const FeatureMatrix& points);

/// Weights restricted to `rows`, keeping the provenance.
VWeights subset(const VWeights& w, std::span<const Index> rows);

struct VMatrix {
  Matrix values;
  GKernelSpec g;
  MeasureSpec mu;
  Combine combine = Combine::product;
  double scale = 1.0;
};

/// V(x_i, x_j) = integral of G(x - x_i) G(x - x_j) dmu(x). With `normalize`, divided by
/// the largest diagonal entry, so the diagonal matches the normalized v-vector.
VMatrix v_matrix(const FeatureMatrix& samples, const GKernelSpec& g, const MeasureSpec& mu,
                 Combine combine = Combine::product, bool normalize = true);

VMatrix subset(const VMatrix& v, std::span<const Index> rows);

}  // namespace cdfsvm
