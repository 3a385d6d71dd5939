#include "cdfsvm/kernels.hpp"

#include <cmath>
#include <sstream>

namespace cdfsvm {

namespace {

void check_dims(std::size_t a, std::size_t b) {
  if (a != b) {
    throw InvalidArgument("kernel arguments have dimensions " + std::to_string(a) + " and " +
                          std::to_string(b));
  }
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    s += d * d;
  }
  return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

double k_eval_unchecked(const KernelSpec& spec, std::span<const double> x,
                        std::span<const double> y) {
  if (spec.kind == KernelSpec::Kind::linear) return dot(x, y);
  return std::exp(-squared_distance(x, y) / (2.0 * spec.delta * spec.delta));
}

}  // namespace

void KernelSpec::validate() const {
  if (kind == Kind::rbf && !(delta > 0.0 && std::isfinite(delta))) {
    throw InvalidArgument("rbf kernel needs a positive finite delta");
  }
}

std::string KernelSpec::describe() const {
  std::ostringstream os;
  if (kind == Kind::linear) {
    os << "linear";
  } else {
    os << "rbf(delta=" << delta << ")";
  }
  return os.str();
}

void GKernelSpec::validate() const {
  if (kind == Kind::gaussian && !(sigma > 0.0 && std::isfinite(sigma))) {
    throw InvalidArgument("gaussian G kernel needs a positive finite sigma");
  }
}

std::string GKernelSpec::describe() const {
  std::ostringstream os;
  if (kind == Kind::step) {
    os << "step";
  } else {
    os << "gaussian(sigma=" << sigma << ")";
  }
  return os.str();
}

double GKernelSpec::factor(double u, double x) const {
  if (kind == Kind::step) return u >= x ? 1.0 : 0.0;
  const double d = u - x;
  return std::exp(-d * d / (2.0 * sigma * sigma));
}

double k_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  spec.validate();
  check_dims(x.size(), y.size());
  return k_eval_unchecked(spec, x, y);
}

double g_eval(const GKernelSpec& spec, std::span<const double> u, std::span<const double> x) {
  spec.validate();
  check_dims(u.size(), x.size());
  if (spec.kind == GKernelSpec::Kind::step) {
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (!(u[k] >= x[k])) return 0.0;
    }
    return 1.0;
  }
  // Product of one-dimensional Gaussians equals one Gaussian of the full distance.
  return std::exp(-squared_distance(u, x) / (2.0 * spec.sigma * spec.sigma));
}

GramMatrix::GramMatrix(Matrix values, KernelSpec spec)
    : values_(std::move(values)), spec_(spec) {
  if (values_.rows() != values_.cols()) throw InvalidArgument("Gram matrix must be square");
}

GramMatrix GramMatrix::subset(std::span<const Index> rows) const {
  return GramMatrix(kernel_block(values_, rows, rows), spec_);
}

GramMatrix gram(const KernelSpec& spec, const FeatureMatrix& x) {
  spec.validate();
  const Index m = x.rows();
  if (m < 1) throw InvalidArgument("gram needs at least one sample");
  Matrix k(m, m);
  for (Index i = 0; i < m; ++i) {
    const auto xi = row_span(x, i);
    for (Index j = i; j < m; ++j) {
      const double v = k_eval_unchecked(spec, xi, row_span(x, j));
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return GramMatrix(std::move(k), spec);
}

Matrix cross_kernel(const KernelSpec& spec, const FeatureMatrix& a, const FeatureMatrix& b) {
  spec.validate();
  check_dims(static_cast<std::size_t>(a.cols()), static_cast<std::size_t>(b.cols()));
  Matrix k(a.rows(), b.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    const auto ai = row_span(a, i);
    for (Index j = 0; j < b.rows(); ++j) k(i, j) = k_eval_unchecked(spec, ai, row_span(b, j));
  }
  return k;
}

Matrix kernel_block(const Matrix& k, std::span<const Index> rows, std::span<const Index> cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      out(static_cast<Index>(r), static_cast<Index>(c)) = k(rows[r], cols[c]);
    }
  }
  return out;
}

}  // namespace cdfsvm
