#include "cdfsvm/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cdfsvm {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSqrtPi = 1.7724538509055160273;

void check_dim(const MeasureSpec& mu, std::size_t d) {
  mu.validate(static_cast<Index>(d));
}

// Integral of the one-dimensional factor G(u - x) over the k-th marginal of a
// parametric measure.
double marginal_integral(const GKernelSpec& g, const MeasureSpec& mu, Index k, double x) {
  switch (mu.kind) {
    case MeasureSpec::Kind::uniform_box: {
      const double c = mu.center[k];
      const double a = mu.half_width[k];
      if (g.kind == GKernelSpec::Kind::step) {
        return std::clamp((c + a - x) / (2.0 * a), 0.0, 1.0);
      }
      const double s = g.sigma * kSqrt2;
      const double t = x - c;
      return g.sigma * std::sqrt(2.0 * std::numbers::pi) / (4.0 * a) *
             (std::erf((a - t) / s) + std::erf((a + t) / s));
    }
    case MeasureSpec::Kind::gaussian: {
      const double m = mu.mean[k];
      const double b = mu.stddev[k];
      if (g.kind == GKernelSpec::Kind::step) return normal_cdf((x - m) / b);
      const double s2 = g.sigma * g.sigma + b * b;
      const double d = x - m;
      return g.sigma / std::sqrt(s2) * std::exp(-d * d / (2.0 * s2));
    }
    case MeasureSpec::Kind::point_mass:
      return 1.0;
    case MeasureSpec::Kind::empirical:
      break;
  }
  throw InvalidArgument("marginal integral is undefined for an empirical measure");
}

// Integral of G(u - xi) G(u - xj) over the k-th marginal of a parametric measure.
double marginal_pair_integral(const GKernelSpec& g, const MeasureSpec& mu, Index k, double xi,
                              double xj) {
  switch (mu.kind) {
    case MeasureSpec::Kind::uniform_box: {
      const double c = mu.center[k];
      const double a = mu.half_width[k];
      if (g.kind == GKernelSpec::Kind::step) {
        return std::clamp((c + a - std::max(xi, xj)) / (2.0 * a), 0.0, 1.0);
      }
      const double sigma = g.sigma;
      const double diff = xi - xj;
      const double mid = 0.5 * (xi + xj) - c;
      return std::exp(-diff * diff / (4.0 * sigma * sigma)) * sigma * kSqrtPi / (4.0 * a) *
             (std::erf((a - mid) / sigma) + std::erf((a + mid) / sigma));
    }
    case MeasureSpec::Kind::gaussian: {
      const double m = mu.mean[k];
      const double b = mu.stddev[k];
      if (g.kind == GKernelSpec::Kind::step) {
        // Same orientation as v_gaussian_step, so the diagonal reproduces the v-vector.
        return normal_cdf((std::min(xi, xj) - m) / b);
      }
      const double sigma2 = g.sigma * g.sigma;
      const double diff = xi - xj;
      const double mid = 0.5 * (xi + xj) - m;
      const double s2 = sigma2 + 2.0 * b * b;
      return std::exp(-diff * diff / (4.0 * sigma2)) * g.sigma / std::sqrt(s2) *
             std::exp(-mid * mid / s2);
    }
    case MeasureSpec::Kind::point_mass:
      return xi == xj ? 1.0 : 0.0;
    case MeasureSpec::Kind::empirical:
      break;
  }
  throw InvalidArgument("pair integral is undefined for an empirical measure");
}

double combine_marginals(const GKernelSpec& g, const MeasureSpec& mu, std::span<const double> x,
                         Combine combine) {
  const auto d = static_cast<Index>(x.size());
  if (combine == Combine::product) {
    double v = 1.0;
    for (Index k = 0; k < d; ++k) v *= marginal_integral(g, mu, k, x[static_cast<std::size_t>(k)]);
    return v;
  }
  double v = 0.0;
  for (Index k = 0; k < d; ++k) v += marginal_integral(g, mu, k, x[static_cast<std::size_t>(k)]);
  return v / static_cast<double>(d);
}

// N x m matrix of G(xhat_s - x_i) for the joint kernel (product) or a single dimension.
Matrix reference_kernel(const GKernelSpec& g, const FeatureMatrix& refs, const FeatureMatrix& x,
                        Index only_dim) {
  Matrix out(refs.rows(), x.rows());
  for (Index i = 0; i < x.rows(); ++i) {
    const auto xi = row_span(x, i);
    for (Index s = 0; s < refs.rows(); ++s) {
      if (only_dim < 0) {
        out(s, i) = g_eval(g, row_span(refs, s), xi);
      } else {
        out(s, i) = g.factor(refs(s, only_dim), x(i, only_dim));
      }
    }
  }
  return out;
}

}  // namespace

MeasureSpec MeasureSpec::uniform_box(Vector center, Vector half_width) {
  MeasureSpec mu;
  mu.kind = Kind::uniform_box;
  mu.center = std::move(center);
  mu.half_width = std::move(half_width);
  mu.validate(mu.center.size());
  return mu;
}

MeasureSpec MeasureSpec::unit_box(Index d) {
  return uniform_box(Vector::Constant(d, 0.5), Vector::Constant(d, 0.5));
}

MeasureSpec MeasureSpec::gaussian(Vector mean, Vector stddev) {
  MeasureSpec mu;
  mu.kind = Kind::gaussian;
  mu.mean = std::move(mean);
  mu.stddev = std::move(stddev);
  mu.validate(mu.mean.size());
  return mu;
}

MeasureSpec MeasureSpec::gaussian_fit(const FeatureMatrix& x) {
  if (x.rows() < 1) throw InvalidArgument("gaussian_fit needs at least one sample");
  const Vector mean = x.colwise().mean().transpose();
  Vector sd(x.cols());
  for (Index k = 0; k < x.cols(); ++k) {
    const double var = (x.col(k).array() - mean[k]).square().mean();
    sd[k] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return gaussian(mean, sd);
}

MeasureSpec MeasureSpec::empirical(FeatureMatrix references) {
  MeasureSpec mu;
  mu.kind = Kind::empirical;
  mu.references = std::move(references);
  mu.validate(mu.references.cols());
  return mu;
}

MeasureSpec MeasureSpec::point_mass() { return MeasureSpec{}; }

void MeasureSpec::validate(Index d) const {
  switch (kind) {
    case Kind::uniform_box:
      if (center.size() != d || half_width.size() != d) {
        throw InvalidArgument("uniform box dimension does not match the samples");
      }
      for (Index k = 0; k < d; ++k) {
        if (!(half_width[k] > 0.0) || !std::isfinite(half_width[k]) || !std::isfinite(center[k])) {
          throw InvalidArgument("uniform box needs a positive half width in every dimension");
        }
      }
      break;
    case Kind::gaussian:
      if (mean.size() != d || stddev.size() != d) {
        throw InvalidArgument("gaussian measure dimension does not match the samples");
      }
      for (Index k = 0; k < d; ++k) {
        if (!(stddev[k] > 0.0) || !std::isfinite(stddev[k]) || !std::isfinite(mean[k])) {
          throw InvalidArgument("gaussian measure needs a positive finite stddev");
        }
      }
      break;
    case Kind::empirical:
      if (references.rows() < 1) throw InvalidArgument("empirical measure has no reference points");
      if (references.cols() != d) {
        throw InvalidArgument("empirical reference dimension does not match the samples");
      }
      break;
    case Kind::point_mass:
      break;
  }
}

std::string MeasureSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::uniform_box: {
      const bool unit = (center.array() == 0.5).all() && (half_width.array() == 0.5).all();
      os << (unit ? "uniform[0,1]^" + std::to_string(center.size()) : std::string("uniform_box"));
      break;
    }
    case Kind::gaussian:
      os << "gaussian(mle)";
      break;
    case Kind::empirical:
      os << "empirical(N=" << references.rows() << ")";
      break;
    case Kind::point_mass:
      os << "point_mass";
      break;
  }
  return os.str();
}

std::string to_string(MeasureSpec::Kind kind) {
  switch (kind) {
    case MeasureSpec::Kind::uniform_box: return "uniform";
    case MeasureSpec::Kind::gaussian: return "gaussian";
    case MeasureSpec::Kind::empirical: return "empirical";
    case MeasureSpec::Kind::point_mass: return "point";
  }
  return "?";
}

std::string to_string(Combine combine) {
  return combine == Combine::product ? "product" : "additive";
}

MeasureSpec::Kind parse_measure_kind(const std::string& text) {
  if (text == "uniform") return MeasureSpec::Kind::uniform_box;
  if (text == "gaussian") return MeasureSpec::Kind::gaussian;
  if (text == "empirical") return MeasureSpec::Kind::empirical;
  if (text == "point") return MeasureSpec::Kind::point_mass;
  throw InvalidArgument("unknown measure '" + text + "'");
}

Combine parse_combine(const std::string& text) {
  if (text == "product") return Combine::product;
  if (text == "additive") return Combine::additive;
  throw InvalidArgument("unknown combine mode '" + text + "'");
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double v_gaussian_step(const MeasureSpec& mu, std::span<const double> x) {
  if (mu.kind != MeasureSpec::Kind::gaussian) {
    throw InvalidArgument("v_gaussian_step needs a gaussian measure");
  }
  check_dim(mu, x.size());
  return combine_marginals(GKernelSpec::step(), mu, x, Combine::product);
}

double v_uniform_gaussian(const MeasureSpec& mu, const GKernelSpec& g, std::span<const double> x,
                          Combine combine) {
  if (mu.kind != MeasureSpec::Kind::uniform_box) {
    throw InvalidArgument("v_uniform_gaussian needs a uniform box measure");
  }
  if (g.kind != GKernelSpec::Kind::gaussian) {
    throw InvalidArgument("v_uniform_gaussian needs a gaussian G kernel");
  }
  g.validate();
  check_dim(mu, x.size());
  return combine_marginals(g, mu, x, combine);
}

double v_empirical(const MeasureSpec& mu, const GKernelSpec& g, std::span<const double> x,
                   Combine combine) {
  if (mu.kind != MeasureSpec::Kind::empirical) {
    throw InvalidArgument("v_empirical needs an empirical measure");
  }
  g.validate();
  check_dim(mu, x.size());
  const Index n = mu.references.rows();
  const auto d = static_cast<Index>(x.size());
  double total = 0.0;
  for (Index s = 0; s < n; ++s) {
    const auto ref = row_span(mu.references, s);
    if (combine == Combine::product) {
      total += g_eval(g, ref, x);
    } else {
      double sum = 0.0;
      for (Index k = 0; k < d; ++k) {
        sum += g.factor(ref[static_cast<std::size_t>(k)], x[static_cast<std::size_t>(k)]);
      }
      total += sum / static_cast<double>(d);
    }
  }
  return total / static_cast<double>(n);
}

double v_raw(const GKernelSpec& g, const MeasureSpec& mu, std::span<const double> x,
             Combine combine) {
  g.validate();
  check_dim(mu, x.size());
  if (mu.kind == MeasureSpec::Kind::empirical) return v_empirical(mu, g, x, combine);
  return combine_marginals(g, mu, x, combine);
}

std::string VWeights::provenance() const {
  std::ostringstream os;
  os << "G=" << g.describe() << ";mu=" << mu.describe() << ";combine=" << to_string(combine)
     << ";scale=" << scale;
  return os.str();
}

VWeights v_vector(const FeatureMatrix& samples, const GKernelSpec& g, const MeasureSpec& mu,
                  Combine combine, bool normalize) {
  g.validate();
  mu.validate(samples.cols());
  Vector raw(samples.rows());
  for (Index i = 0; i < samples.rows(); ++i) raw[i] = v_raw(g, mu, row_span(samples, i), combine);
  if (!raw.allFinite()) throw InvalidArgument("distribution weights are not finite");
  const double top = raw.size() > 0 ? raw.maxCoeff() : 0.0;
  if (!(top > 0.0)) {
    throw InvalidArgument("all distribution weights are zero for " + g.describe() + " under " +
                          mu.describe());
  }
  VWeights w;
  w.combine = combine;
  w.g = g;
  w.mu = mu;
  w.scale = normalize ? top : 1.0;
  w.values = raw / w.scale;
  return w;
}

Vector v_values(const VWeights& fitted, const FeatureMatrix& points) {
  Vector out(points.rows());
  for (Index i = 0; i < points.rows(); ++i) {
    out[i] = v_raw(fitted.g, fitted.mu, row_span(points, i), fitted.combine) / fitted.scale;
  }
  return out;
}

VWeights subset(const VWeights& w, std::span<const Index> rows) {
  VWeights out = w;
  out.values.resize(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out.values[static_cast<Index>(r)] = w.values[rows[r]];
  return out;
}

VMatrix v_matrix(const FeatureMatrix& samples, const GKernelSpec& g, const MeasureSpec& mu,
                 Combine combine, bool normalize) {
  g.validate();
  mu.validate(samples.cols());
  const Index m = samples.rows();
  const Index d = samples.cols();
  Matrix v = Matrix::Zero(m, m);

  if (mu.kind == MeasureSpec::Kind::empirical) {
    const double n = static_cast<double>(mu.references.rows());
    if (combine == Combine::product) {
      const Matrix gk = reference_kernel(g, mu.references, samples, -1);
      v.noalias() = gk.transpose() * gk;
      v /= n;
    } else {
      for (Index k = 0; k < d; ++k) {
        const Matrix gk = reference_kernel(g, mu.references, samples, k);
        v.noalias() += gk.transpose() * gk;
      }
      v /= n * static_cast<double>(d);
    }
  } else if (mu.kind == MeasureSpec::Kind::point_mass) {
    v.setIdentity();
  } else {
    for (Index i = 0; i < m; ++i) {
      for (Index j = i; j < m; ++j) {
        double value = combine == Combine::product ? 1.0 : 0.0;
        for (Index k = 0; k < d; ++k) {
          const double f = marginal_pair_integral(g, mu, k, samples(i, k), samples(j, k));
          value = combine == Combine::product ? value * f : value + f;
        }
        if (combine == Combine::additive) value /= static_cast<double>(d);
        v(i, j) = value;
        v(j, i) = value;
      }
    }
  }
  // Mirror explicitly so symmetry is exact for the matrix-product branch as well.
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) v(j, i) = v(i, j);
  }

  const double top = m > 0 ? v.diagonal().maxCoeff() : 0.0;
  if (!(top > 0.0)) {
    throw InvalidArgument("V-matrix is identically zero for " + g.describe() + " under " +
                          mu.describe());
  }
  VMatrix out;
  out.g = g;
  out.mu = mu;
  out.combine = combine;
  out.scale = normalize ? top : 1.0;
  out.values = v / out.scale;
  return out;
}

VMatrix subset(const VMatrix& v, std::span<const Index> rows) {
  VMatrix out = v;
  out.values = kernel_block(v.values, rows, rows);
  return out;
}

}  // namespace cdfsvm
