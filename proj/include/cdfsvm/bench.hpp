#pragma once

#include "cdfsvm/datagen.hpp"
#include "cdfsvm/evaluation.hpp"
#include "cdfsvm/modelsel.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cdfsvm {

/// A benchmark column: a fitted method, or the analytic Bayes rule when empty.
struct BenchMethod {
  std::optional<Method> method;

  static BenchMethod bayes() { return {}; }
  std::string name() const { return method ? to_string(*method) : "bayes"; }
};

BenchMethod parse_bench_method(const std::string& text);

/// Grid used by the synthetic boundary benchmark: linear kernel, gamma 2^-4..2^4,
/// gaussian G with a uniform-box measure, 10 folds.
GridSpec bayes_bench_grid();

struct BayesBenchConfig {
  std::vector<Index> sizes{100, 200, 300};
  int repetitions = 100;
  std::vector<BenchMethod> methods;
  std::vector<Indicator> indicators{Indicator::acc, Indicator::vac};
  GridSpec grid = bayes_bench_grid();
  GaussianSpec2D model;
  std::uint64_t seed = 1;
  /// A column stops after this many consecutive failed repetitions.
  int max_consecutive_failures = 3;
};

struct BayesRun {
  Index n = 0;
  int repetition = 0;
  std::string method;
  Indicator indicator = Indicator::acc;
  bool ok = false;
  double k = 0.0;
  double q = 0.0;
  std::string cell;
  std::string error;
};

struct BayesColumn {
  Index n = 0;
  std::string method;
  Indicator indicator = Indicator::acc;
  std::vector<double> ks;
  std::vector<double> qs;
  int failures = 0;
  bool aborted = false;
  std::string last_error;

  bool has_stats() const { return ks.size() >= 2; }
  double dist(double k0, double q0) const { return dist_to_bayes(ks, qs, k0, q0); }
};

struct BayesBenchResult {
  std::vector<BayesColumn> columns;
  std::vector<BayesRun> runs;
  double k0 = 2.0;
  double q0 = 0.0;

  const BayesColumn* find(Index n, const std::string& method, Indicator indicator) const;
  /// True when every requested column finished all repetitions.
  bool complete() const;
};

/// Seed of repetition `rep` at size `n`; depends only on (seed, n, rep).
std::uint64_t repetition_seed(std::uint64_t seed, Index n, int rep);

using Progress = std::function<void(const std::string&)>;

BayesBenchResult run_bayes_bench(const BayesBenchConfig& cfg, const Progress& progress = {});

/// Dist / k mean +- sd / q mean +- sd per method, one block per size.
std::string format_bayes_table(const BayesBenchResult& result);
std::string bayes_runs_csv(const BayesBenchResult& result);
std::string bayes_summary_csv(const BayesBenchResult& result);

struct UciBenchConfig {
  std::vector<std::string> datasets;
  std::vector<Method> methods;
  GridSpec grid;
  /// Repeated 10-fold evaluations of the selected cell.
  int repetitions = 5;
  CsvOptions csv;
};

struct UciEntry {
  std::string dataset;
  std::string method;
  bool ok = false;
  double gmean_mean = 0.0;
  double gmean_sd = 0.0;
  double acc_mean = 0.0;
  double acc_sd = 0.0;
  std::string cell;
  std::string error;
};

struct UciBenchResult {
  std::vector<std::string> datasets;
  std::vector<std::string> methods;
  std::vector<UciEntry> entries;

  const UciEntry* find(const std::string& dataset, const std::string& method) const;
  bool complete() const;
};

/// Evaluates one in-memory dataset.
std::vector<UciEntry> run_uci_dataset(const Dataset& data, const UciBenchConfig& cfg,
                                      const Progress& progress = {});
UciBenchResult run_uci_bench(const UciBenchConfig& cfg, const Progress& progress = {});

/// Rows are datasets, columns methods, cells "G-mean+-sd(Acc)" in percent.
std::string format_uci_table(const UciBenchResult& result);
std::string uci_csv(const UciBenchResult& result);

}  // namespace cdfsvm
