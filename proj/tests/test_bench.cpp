#include "doctest.h"

#include "cdfsvm/bench.hpp"
#include "cdfsvm/io.hpp"

#include <filesystem>

using namespace cdfsvm;

namespace {

BayesBenchConfig small_config() {
  BayesBenchConfig c;
  c.sizes = {40};
  c.repetitions = 2;
  c.grid.gammas = {0.5, 2.0};
  c.grid.epsilons = {0.125};
  c.grid.sigmas = {1.0};
  c.grid.folds = 4;
  return c;
}

}  // namespace

TEST_CASE("the analytic column has zero distance") {
  BayesBenchConfig c = small_config();
  c.methods = {BenchMethod::bayes()};
  const BayesBenchResult r = run_bayes_bench(c);
  const BayesColumn* col = r.find(40, "bayes", Indicator::acc);
  REQUIRE(col != nullptr);
  CHECK(col->dist(r.k0, r.q0) == 0.0);
  CHECK(r.complete());
}

TEST_CASE("fixed seeds give a reproducible table") {
  BayesBenchConfig c = small_config();
  c.methods = {parse_bench_method("lssvm"), parse_bench_method("eps-l1vsvm")};
  const BayesBenchResult a = run_bayes_bench(c);
  const BayesBenchResult b = run_bayes_bench(c);
  CHECK(format_bayes_table(a) == format_bayes_table(b));
  CHECK(bayes_runs_csv(a) == bayes_runs_csv(b));
  CHECK(a.complete());
  CHECK(a.runs.size() == 8);
  CHECK(repetition_seed(1, 40, 0) != repetition_seed(1, 40, 1));
  CHECK(repetition_seed(1, 40, 0) != repetition_seed(1, 41, 0));
}

TEST_CASE("uci table shape") {
  const auto dir = std::filesystem::temp_directory_path() / "cdfsvm_bench_test";
  std::filesystem::create_directories(dir);
  GaussianSpec2D spec;
  spec.n = 40;
  const LabeledSamples s = sample_gaussian_2d(spec);
  const std::string path = (dir / "toy.csv").string();
  write_file_atomic(path, format_csv(s.x, s.y));

  UciBenchConfig c;
  c.datasets = {path};
  c.methods = {Method::lssvm};
  c.grid.gammas = {1.0};
  c.grid.deltas = {1.0};
  c.grid.folds = 4;
  c.repetitions = 2;
  UciBenchResult one = run_uci_bench(c);
  CHECK(one.complete());
  CHECK(one.entries.size() == 1);
  CHECK(one.find("toy", "lssvm")->gmean_mean > 0.9);

  c.methods.push_back(Method::csvm);
  UciBenchResult two = run_uci_bench(c);
  CHECK(two.datasets == one.datasets);
  CHECK(two.methods.size() == 2);

  c.datasets.push_back((dir / "missing.csv").string());
  UciBenchResult partial = run_uci_bench(c);
  CHECK_FALSE(partial.complete());
  CHECK(partial.entries.size() == 4);
  CHECK(format_uci_table(partial).find("failed") != std::string::npos);
  std::filesystem::remove_all(dir);
}
