#include "cdfsvm/datagen.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace cdfsvm {

namespace {

void check_size(Index n) {
  if (n < 4 || n % 2 != 0) {
    throw InvalidArgument("sample count must be even and at least 4, got " + std::to_string(n));
  }
}

LabeledSamples draw_two_gaussians(const GaussianClass& pos, const GaussianClass& neg, Index n,
                                  std::uint64_t seed) {
  check_size(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  const Index d = pos.mean.size();
  LabeledSamples s{FeatureMatrix(n, d), Vector(n)};
  for (Index i = 0; i < n; ++i) {
    const bool first = i < n / 2;
    const GaussianClass& c = first ? pos : neg;
    for (Index k = 0; k < d; ++k) s.x(i, k) = c.mean[k] + std::sqrt(c.variances[k]) * z(rng);
    s.y[i] = first ? 1.0 : 0.0;
  }
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = b + s.size();
  if (*b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e && std::isfinite(out);
}

constexpr std::array<int, 6> kMonkSizes{3, 3, 2, 3, 4, 2};

}  // namespace

void GaussianClass::validate() const {
  if (mean.size() < 1 || mean.size() != variances.size()) {
    throw InvalidArgument("gaussian class needs matching mean and variance vectors");
  }
  for (Index k = 0; k < variances.size(); ++k) {
    if (!(variances[k] > 0.0) || !std::isfinite(variances[k]) || !std::isfinite(mean[k])) {
      throw InvalidArgument("gaussian class has a degenerate covariance");
    }
  }
}

double GaussianClass::log_density(std::span<const double> x) const {
  if (static_cast<Index>(x.size()) != mean.size()) {
    throw InvalidArgument("point dimension does not match the class model");
  }
  double s = 0.0;
  for (Index k = 0; k < mean.size(); ++k) {
    const double d = x[static_cast<std::size_t>(k)] - mean[k];
    s += d * d / variances[k] + std::log(2.0 * std::numbers::pi * variances[k]);
  }
  return -0.5 * s;
}

void GaussianSpec2D::validate() const {
  if (mu.size() != 2 || variances.size() != 2) {
    throw InvalidArgument("the bivariate model needs 2-D mean and variances");
  }
  positive().validate();
  check_size(n);
}

GaussianClass GaussianSpec2D::positive() const { return {mu, variances}; }
GaussianClass GaussianSpec2D::negative() const { return {-mu, variances}; }

double GaussianSpec2D::bayes_slope() const {
  // Log-odds 2 mu' S^-1 x vanish on the line through the origin.
  const double w1 = mu[0] / variances[0];
  const double w2 = mu[1] / variances[1];
  if (w2 == 0.0) throw InvalidArgument("the Bayes boundary is vertical");
  return -w1 / w2;
}

double GaussianSpec2D::bayes_intercept() const {
  bayes_slope();
  return 0.0;
}

double GaussianSpec2D::bayes_error() const {
  const double maha2 = 4.0 * (mu.array().square() / variances.array()).sum();
  return 0.5 * std::erfc(std::sqrt(maha2) / 2.0 / std::numbers::sqrt2);
}

void Robustness1DSpec::validate() const {
  if (!(variance > 0.0) || !std::isfinite(variance) || !std::isfinite(center)) {
    throw InvalidArgument("robustness model needs a positive variance");
  }
  check_size(n);
}

GaussianClass Robustness1DSpec::positive() const {
  return {Vector::Constant(1, -center), Vector::Constant(1, variance)};
}

GaussianClass Robustness1DSpec::negative() const {
  return {Vector::Constant(1, center), Vector::Constant(1, variance)};
}

LabeledSamples sample_gaussian_2d(const GaussianSpec2D& spec) {
  spec.validate();
  return draw_two_gaussians(spec.positive(), spec.negative(), spec.n, spec.seed);
}

LabeledSamples sample_robustness_1d(const Robustness1DSpec& spec) {
  spec.validate();
  return draw_two_gaussians(spec.positive(), spec.negative(), spec.n, spec.seed);
}

Dataset gen_gaussian_2d(const GaussianSpec2D& spec) {
  return make_dataset(sample_gaussian_2d(spec), "gaussian2d");
}

Dataset gen_robustness_1d(const Robustness1DSpec& spec) {
  return make_dataset(sample_robustness_1d(spec), "robustness1d");
}

double bayes_posterior(std::span<const double> x, const GaussianClass& positive,
                       const GaussianClass& negative) {
  positive.validate();
  negative.validate();
  const double diff = negative.log_density(x) - positive.log_density(x);
  // 1 / (1 + exp(diff)) without overflow.
  if (diff > 0.0) {
    const double e = std::exp(-diff);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(diff));
}

int monk3_rule(std::span<const double> a) {
  if (a.size() != kMonkSizes.size()) throw InvalidArgument("the rule needs six attributes");
  return ((a[4] == 3.0 && a[3] == 1.0) || (a[4] != 4.0 && a[1] != 3.0)) ? 1 : 0;
}

LabeledSamples monk3_full() {
  Index total = 1;
  for (int s : kMonkSizes) total *= s;
  LabeledSamples out{FeatureMatrix(total, 6), Vector(total)};
  for (Index r = 0; r < total; ++r) {
    Index rest = r;
    for (int k = 5; k >= 0; --k) {
      const int size = kMonkSizes[static_cast<std::size_t>(k)];
      out.x(r, k) = static_cast<double>(rest % size + 1);
      rest /= size;
    }
    out.y[r] = monk3_rule(row_span(out.x, r));
  }
  return out;
}

LabeledSamples monk3_sample(Index n, double noise, std::uint64_t seed) {
  const LabeledSamples full = monk3_full();
  if (n < 2 || n > full.x.rows()) {
    throw InvalidArgument("sample size must lie in [2, " + std::to_string(full.x.rows()) + "]");
  }
  if (!(noise >= 0.0 && noise <= 1.0)) throw InvalidArgument("noise must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<Index> order = iota_indices(full.x.rows());
  std::shuffle(order.begin(), order.end(), rng);
  LabeledSamples out{FeatureMatrix(n, 6), Vector(n)};
  for (Index r = 0; r < n; ++r) {
    out.x.row(r) = full.x.row(order[static_cast<std::size_t>(r)]);
    out.y[r] = full.y[order[static_cast<std::size_t>(r)]];
  }
  std::vector<Index> flip = iota_indices(n);
  std::shuffle(flip.begin(), flip.end(), rng);
  const auto flips = static_cast<Index>(std::lround(noise * static_cast<double>(n)));
  for (Index f = 0; f < flips; ++f) {
    const Index r = flip[static_cast<std::size_t>(f)];
    out.y[r] = 1.0 - out.y[r];
  }
  return out;
}

LabeledSamples parse_csv(const std::string& text, const CsvOptions& options,
                         const std::string& source) {
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  std::size_t label_col = 0;
  bool first = true;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> tokens;
  std::vector<std::size_t> token_lines;

  while (std::getline(is, line)) {
    ++lineno;
    if (lineno == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    const auto cells = split_row(line);
    if (first) {
      width = cells.size();
      if (width < 2) throw ParseError(source + ": a row needs at least one feature and a label", lineno);
      const int lc = options.label_column < 0 ? static_cast<int>(width) + options.label_column
                                              : options.label_column;
      if (lc < 0 || lc >= static_cast<int>(width)) {
        throw ParseError(source + ": label column " + std::to_string(options.label_column) +
                             " is outside the " + std::to_string(width) + " columns",
                         lineno);
      }
      label_col = static_cast<std::size_t>(lc);
      first = false;
      bool numeric = true;
      double tmp = 0.0;
      for (std::size_t c = 0; c < width; ++c) {
        if (c != label_col && !parse_number(cells[c], tmp)) numeric = false;
      }
      if (!numeric) continue;  // header row
    }
    if (cells.size() != width) {
      throw ParseError(source + ": expected " + std::to_string(width) + " cells, found " +
                           std::to_string(cells.size()),
                       lineno);
    }
    std::vector<double> row;
    row.reserve(width - 1);
    for (std::size_t c = 0; c < width; ++c) {
      if (c == label_col) continue;
      double v = 0.0;
      if (!parse_number(cells[c], v)) {
        throw ParseError(source + ": non-numeric feature '" + cells[c] + "' in column " +
                             std::to_string(c),
                         lineno);
      }
      row.push_back(v);
    }
    if (cells[label_col].empty()) throw ParseError(source + ": missing label", lineno);
    rows.push_back(std::move(row));
    tokens.push_back(cells[label_col]);
    token_lines.push_back(lineno);
  }
  if (rows.empty()) throw ParseError(source + ": empty dataset", std::max<std::size_t>(lineno, 1));

  std::map<std::string, int> distinct;
  for (const auto& t : tokens) distinct.emplace(t, 0);
  if (distinct.size() > 2) {
    throw ParseError(source + ": found " + std::to_string(distinct.size()) +
                         " distinct labels, expected two",
                     token_lines.back());
  }
  if (!options.positive_label.empty()) {
    for (auto& [tok, cls] : distinct) cls = tok == options.positive_label ? 1 : 0;
  } else {
    std::vector<double> values;
    for (const auto& [tok, cls] : distinct) {
      double v = 0.0;
      if (!parse_number(tok, v)) {
        throw ParseError(source + ": label '" + tok + "' is not numeric; name the positive label",
                         token_lines.front());
      }
      values.push_back(v);
    }
    const bool conventional = std::all_of(values.begin(), values.end(), [](double v) {
      return v == 1.0 || v == 0.0 || v == -1.0;
    });
    const double hi = *std::max_element(values.begin(), values.end());
    for (auto& [tok, cls] : distinct) {
      double v = 0.0;
      parse_number(tok, v);
      cls = conventional ? static_cast<int>(ingest_label(v)) : (v == hi && values.size() == 2 ? 1 : 0);
    }
  }

  LabeledSamples out{FeatureMatrix(static_cast<Index>(rows.size()), static_cast<Index>(width - 1)),
                     Vector(static_cast<Index>(rows.size()))};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      out.x(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
    out.y[static_cast<Index>(r)] = distinct.at(tokens[r]);
  }
  return out;
}

LabeledSamples read_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options, path);
}

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  LabeledSamples s = read_csv(path, options);
  std::string name = path;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return make_dataset(s, name, options.scaler);
}

std::string format_csv(const FeatureMatrix& x, const Vector& y, bool header) {
  if (y.size() != x.rows()) throw InvalidArgument("label count does not match sample count");
  std::string out;
  if (header) {
    for (Index k = 0; k < x.cols(); ++k) out += "x" + std::to_string(k + 1) + ",";
    out += "y\n";
  }
  char buf[64];
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index k = 0; k < x.cols(); ++k) {
      const auto res = std::to_chars(buf, buf + sizeof buf, x(i, k));
      out.append(buf, res.ptr);
      out += ',';
    }
    out += y[i] == 1.0 ? "1" : "0";
    out += '\n';
  }
  return out;
}

}  // namespace cdfsvm
