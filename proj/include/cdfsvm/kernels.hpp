#pragma once

#include "cdfsvm/core.hpp"

#include <span>
#include <string>

namespace cdfsvm {

/// Solution kernel K. The rbf form is exp(-|x-x'|^2 / (2 delta^2)).
struct KernelSpec {
  enum class Kind { rbf, linear };

  Kind kind = Kind::rbf;
  double delta = 1.0;

  static KernelSpec rbf(double delta) { return {Kind::rbf, delta}; }
  static KernelSpec linear() { return {Kind::linear, 0.0}; }

  void validate() const;
  std::string describe() const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// Fredholm kernel G(u - x). The step kernel is the product over dimensions of
/// theta(u^k - x^k), which fires when u >= x coordinatewise.
struct GKernelSpec {
  enum class Kind { gaussian, step };

  Kind kind = Kind::gaussian;
  double sigma = 1.0;

  static GKernelSpec gaussian(double sigma) { return {Kind::gaussian, sigma}; }
  static GKernelSpec step() { return {Kind::step, 0.0}; }

  void validate() const;
  std::string describe() const;

  /// One-dimensional factor G(u - x).
  double factor(double u, double x) const;

  friend bool operator==(const GKernelSpec&, const GKernelSpec&) = default;
};

double k_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);
double g_eval(const GKernelSpec& spec, std::span<const double> u, std::span<const double> x);

/// Symmetric m x m kernel matrix over a sample set.
class GramMatrix {
 public:
  GramMatrix(Matrix values, KernelSpec spec);

  const Matrix& values() const { return values_; }
  const KernelSpec& spec() const { return spec_; }
  Index size() const { return values_.rows(); }
  double operator()(Index i, Index j) const { return values_(i, j); }

  GramMatrix subset(std::span<const Index> rows) const;

 private:
  Matrix values_;
  KernelSpec spec_;
};

GramMatrix gram(const KernelSpec& spec, const FeatureMatrix& x);

/// Rectangular kernel block: entry (i, j) = K(a_i, b_j).
Matrix cross_kernel(const KernelSpec& spec, const FeatureMatrix& a, const FeatureMatrix& b);

/// Rows/columns `rows` x `cols` of a precomputed kernel matrix.
Matrix kernel_block(const Matrix& k, std::span<const Index> rows, std::span<const Index> cols);

}  // namespace cdfsvm
