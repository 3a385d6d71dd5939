#include "doctest.h"

#include "cdfsvm/datagen.hpp"
#include "cdfsvm/io.hpp"

#include <cmath>
#include <filesystem>

using namespace cdfsvm;

TEST_CASE("bivariate generator is reproducible and balanced") {
  GaussianSpec2D spec;
  spec.n = 100;
  spec.seed = 9;
  const LabeledSamples a = sample_gaussian_2d(spec);
  const LabeledSamples b = sample_gaussian_2d(spec);
  CHECK(a.x == b.x);
  CHECK(a.y.sum() == 50.0);
  spec.seed = 10;
  CHECK(sample_gaussian_2d(spec).x != a.x);
  spec.n = 101;
  CHECK_THROWS_AS(sample_gaussian_2d(spec), InvalidArgument);
}

TEST_CASE("class means match the model") {
  GaussianSpec2D spec;
  spec.n = 40000;
  spec.seed = 2;
  const LabeledSamples s = sample_gaussian_2d(spec);
  Eigen::Vector2d pos = Eigen::Vector2d::Zero();
  Eigen::Vector2d neg = Eigen::Vector2d::Zero();
  for (Index i = 0; i < s.x.rows(); ++i) {
    if (s.y[i] == 1.0) {
      pos += s.x.row(i).transpose();
    } else {
      neg += s.x.row(i).transpose();
    }
  }
  pos /= 20000.0;
  neg /= 20000.0;
  // Four standard errors.
  CHECK(std::abs(pos[0] - 1.0) < 4.0 * std::sqrt(0.5 / 20000.0));
  CHECK(std::abs(pos[1] + 2.0) < 4.0 * std::sqrt(2.0 / 20000.0));
  CHECK(std::abs(neg[0] + 1.0) < 4.0 * std::sqrt(0.5 / 20000.0));
  CHECK(std::abs(neg[1] - 2.0) < 4.0 * std::sqrt(2.0 / 20000.0));
}

TEST_CASE("bayes line and posterior") {
  const GaussianSpec2D spec;
  CHECK(spec.bayes_slope() == doctest::Approx(2.0));
  CHECK(spec.bayes_intercept() == 0.0);
  // Mahalanobis distance between the means is sqrt(4 * (1/0.5 + 4/2)) = 4.
  CHECK(spec.bayes_error() == doctest::Approx(0.5 * std::erfc(2.0 / std::sqrt(2.0))));
  const GaussianClass p = spec.positive();
  const GaussianClass n = spec.negative();
  for (double x1 : {-1.0, 0.3, 2.0}) {
    const std::vector<double> on{x1, 2.0 * x1};
    CHECK(bayes_posterior(on, p, n) == doctest::Approx(0.5));
    const std::vector<double> x{x1, 0.7};
    CHECK(bayes_posterior(x, p, n) + bayes_posterior(x, n, p) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const std::vector<double> far{30.0, -60.0};
  CHECK(bayes_posterior(far, p, n) == 1.0);
}

TEST_CASE("one-dimensional posterior is logistic in x") {
  const Robustness1DSpec spec;
  for (double x : {-2.0, 0.0, 0.4, 3.0}) {
    const std::vector<double> p{x};
    CHECK(bayes_posterior(p, spec.positive(), spec.negative()) ==
          doctest::Approx(1.0 / (1.0 + std::exp(2.0 * x))).epsilon(1e-12));
  }
  const LabeledSamples s = sample_robustness_1d(spec);
  CHECK(s.x.rows() == 200);
  CHECK(s.y.head(100).sum() == 100.0);
}

TEST_CASE("monk3 rule and samples") {
  const std::vector<double> a{1, 1, 1, 1, 3, 1};
  CHECK(monk3_rule(a) == 1);
  const std::vector<double> b{1, 3, 1, 2, 4, 1};
  CHECK(monk3_rule(b) == 0);
  const std::vector<double> c{2, 2, 1, 3, 2, 2};
  CHECK(monk3_rule(c) == 1);
  const LabeledSamples full = monk3_full();
  CHECK(full.x.rows() == 432);
  const LabeledSamples s = monk3_sample(120, 0.05, 1);
  CHECK(s.x.rows() == 120);
  long flipped = 0;
  for (Index i = 0; i < 120; ++i) {
    const std::vector<double> row(s.x.row(i).data(), s.x.row(i).data() + 6);
    flipped += monk3_rule(row) != static_cast<int>(s.y[i]) ? 1 : 0;
  }
  CHECK(flipped == 6);
}

TEST_CASE("csv parsing") {
  SUBCASE("plus-minus labels") {
    const LabeledSamples s = parse_csv("1,2,1\n3,4,-1\n5,0,1\n");
    CHECK(s.y[1] == 0.0);
    const Dataset d = make_dataset(s);
    CHECK(d.features().maxCoeff() <= 1.0);
  }
  SUBCASE("header only") {
    CHECK_THROWS_WITH_AS(parse_csv("a,b,label\n"), doctest::Contains("empty dataset"), ParseError);
  }
  SUBCASE("three labels") { CHECK_THROWS_AS(parse_csv("1,a\n2,b\n3,c\n"), ParseError); }
  SUBCASE("bad cell reports its line") {
    try {
      parse_csv("x,y\n1,1\n2,zz,1\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("named labels and label column") {
    CsvOptions o;
    o.label_column = 0;
    o.positive_label = "yes";
    const LabeledSamples s = parse_csv("yes,1.5\nno,2.5\n", o);
    CHECK(s.y[0] == 1.0);
    CHECK(s.x(1, 0) == 2.5);
  }
}

TEST_CASE("csv round trip") {
  GaussianSpec2D spec;
  spec.n = 30;
  const LabeledSamples s = sample_gaussian_2d(spec);
  const auto path = (std::filesystem::temp_directory_path() / "cdfsvm_roundtrip.csv").string();
  write_file_atomic(path, format_csv(s.x, s.y));
  const LabeledSamples back = read_csv(path);
  CHECK((back.x - s.x).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(back.y == s.y);
  const Dataset d = load_csv(path);
  CHECK(d.name() == "cdfsvm_roundtrip");
  std::filesystem::remove(path);
}
