#include "doctest.h"

#include "cdfsvm/core.hpp"

#include <cmath>
#include <limits>

using namespace cdfsvm;

TEST_CASE("scaler maps each column onto the unit interval") {
  FeatureMatrix raw(3, 2);
  raw << 1, 10, 3, 20, 2, 40;
  const Normalized n = normalize(raw);
  CHECK(n.features(0, 0) == 0.0);
  CHECK(n.features(1, 0) == 1.0);
  CHECK(n.features(2, 0) == doctest::Approx(0.5));
  CHECK(n.features(1, 1) == doctest::Approx(1.0 / 3.0));
  const FeatureMatrix back = n.scaler.inverse(n.features);
  CHECK((back - raw).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("constant columns map to one half") {
  FeatureMatrix raw(3, 2);
  raw << 1, 5, 2, 5, 3, 5;
  const Normalized n = normalize(raw);
  CHECK(n.scaler.is_constant(1));
  CHECK(n.features.col(1).isConstant(0.5));
}

TEST_CASE("a supplied scaler clips values outside the fitted range") {
  FeatureMatrix fit(2, 1);
  fit << 0, 10;
  const Scaler s = Scaler::fit(fit);
  FeatureMatrix x(3, 1);
  x << -5, 5, 20;
  const FeatureMatrix t = s.transform(x);
  CHECK(t(0, 0) == 0.0);
  CHECK(t(1, 0) == doctest::Approx(0.5));
  CHECK(t(2, 0) == 1.0);
}

TEST_CASE("decision threshold") {
  CHECK(decide(0.5) == 0);
  CHECK(decide(0.5000001) == 1);
  CHECK(decide(-3.0) == 0);
  CHECK_THROWS_AS(decide(std::nan("")), InvalidArgument);
  CHECK_THROWS_AS(decide(std::numeric_limits<double>::infinity()), InvalidArgument);
}

TEST_CASE("label ingestion") {
  CHECK(ingest_label(1.0) == 1.0);
  CHECK(ingest_label(-1.0) == 0.0);
  CHECK(ingest_label(0.0) == 0.0);
  CHECK_THROWS_AS(ingest_label(2.0), InvalidArgument);
}

TEST_CASE("dataset validation") {
  FeatureMatrix x(3, 1);
  x << 0, 0.5, 1;
  Vector y(3);
  y << 1, 0, 1;
  const Scaler s(Vector::Zero(1), Vector::Ones(1));
  const Dataset d(x, y, s);
  CHECK(d.count(1) == 2);
  CHECK(d.has_both_classes());

  Vector bad = y;
  bad[1] = 0.5;
  CHECK_THROWS_AS(Dataset(x, bad, s), InvalidArgument);
  CHECK_THROWS_AS(Dataset(x, Vector::Ones(2), s), InvalidArgument);
  FeatureMatrix out = x;
  out(0, 0) = 1.5;
  CHECK_THROWS_AS(Dataset(out, y, s), InvalidArgument);

  const std::vector<Index> rows{0, 2};
  const Dataset sub = d.subset(rows);
  CHECK(sub.size() == 2);
  CHECK_FALSE(sub.has_both_classes());
  CHECK_THROWS_AS(sub.require_both_classes("test"), InvalidArgument);
}

TEST_CASE("make_dataset normalizes and maps labels") {
  LabeledSamples s;
  s.x.resize(3, 2);
  s.x << 1, 2, 3, 4, 5, 6;
  s.y.resize(3);
  s.y << 1, -1, 1;
  const Dataset d = make_dataset(s, "toy");
  CHECK(d.name() == "toy");
  CHECK(d.labels()[1] == 0.0);
  CHECK(d.features().minCoeff() >= 0.0);
  CHECK(d.features().maxCoeff() <= 1.0);
}
