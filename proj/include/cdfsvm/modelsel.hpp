#pragma once

#include "cdfsvm/core.hpp"
#include "cdfsvm/distribution.hpp"
#include "cdfsvm/kernels.hpp"
#include "cdfsvm/solvers.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cdfsvm {

enum class Indicator { acc, vac };

std::string to_string(Indicator indicator);
Indicator parse_indicator(const std::string& text);

/// Builds a measure of the given kind over `reference` (uniform ignores it and
/// uses the unit box; point ignores it entirely).
MeasureSpec build_measure(MeasureSpec::Kind kind, const FeatureMatrix& reference);

/// How distribution weights are formed for model fitting and for Vac.
struct WeightRecipe {
  MeasureSpec::Kind mu = MeasureSpec::Kind::empirical;
  Combine combine = Combine::product;

  std::string describe() const;
};

/// Fixed (G, mu) pair used to score Vac, shared by every method and grid cell.
struct VacRecipe {
  GKernelSpec g = GKernelSpec::step();
  MeasureSpec::Kind mu = MeasureSpec::Kind::gaussian;
  Combine combine = Combine::product;

  std::string describe() const;
};

/// Settings shared by every fit, independent of the searched hyperparameters.
struct FitOptions {
  KernelSpec::Kind kernel = KernelSpec::Kind::rbf;
  WeightRecipe weights;
  double tolerance = 1e-3;
  long max_iterations = 100000;
  int neighbours = 5;
  std::uint64_t seed = 0;
};

/// One point of the search grid. `delta` is ignored for the linear kernel,
/// `epsilon` for methods without a tube, and `g` is empty for unweighted methods.
struct GridCell {
  double gamma = 1.0;
  double delta = 1.0;
  double epsilon = 0.0;
  std::optional<GKernelSpec> g;

  KernelSpec kernel(KernelSpec::Kind kind) const;
  std::string describe() const;
};

/// Powers of two 2^lo ... 2^hi.
std::vector<double> powers_of_two(int lo, int hi);

struct GridSpec {
  std::vector<double> gammas = powers_of_two(-8, 8);
  std::vector<double> deltas = powers_of_two(-4, 4);
  std::vector<double> epsilons = powers_of_two(-4, -2);
  std::vector<double> sigmas = powers_of_two(-4, 4);
  /// Adds the step kernel to the G options.
  bool include_step = true;
  int folds = 10;
  Indicator indicator = Indicator::acc;
  std::uint64_t seed = 0;
  /// Weights use every sample of the dataset as reference; otherwise only the fold's
  /// training part.
  bool transductive = true;
  FitOptions fit;
  VacRecipe vac;

  void validate() const;
};

/// Cells in selection order: gamma, delta, epsilon, then G (step before gaussian,
/// sigma ascending), each ascending.
std::vector<GridCell> enumerate_cells(Method method, const GridSpec& grid);

struct Fold {
  std::vector<Index> train;
  std::vector<Index> test;
};

/// Plain shuffled split of 0..m-1.
std::vector<Fold> kfold_split(Index m, int folds, std::uint64_t seed);
/// Stratified split: each class is shuffled and dealt round-robin onto the folds.
std::vector<Fold> kfold_split(const Vector& labels, int folds, std::uint64_t seed);

struct FoldScore {
  Index cell = 0;
  int fold = 0;
  double acc = 0.0;
  double vac = 0.0;
  double gmean = 0.0;
  bool valid = false;
  bool converged = true;
};

struct CellScore {
  GridCell cell;
  double acc = 0.0;
  double vac = 0.0;
  double gmean = 0.0;
  bool valid = false;
  int unconverged = 0;
  std::string error;

  double score(Indicator indicator) const { return indicator == Indicator::acc ? acc : vac; }
};

struct GridResult {
  Method method = Method::lssvm;
  std::vector<CellScore> cells;
  std::vector<FoldScore> folds;
  std::string vac_provenance;

  /// First valid cell with the largest mean indicator; -1 when no cell is valid.
  Index best_index(Indicator indicator) const;
  const CellScore& best(Indicator indicator) const;
};

GridResult grid_search(const Dataset& data, Method method, const GridSpec& grid);
/// Same search restricted to `rows` of `data`, with weights referenced to the whole
/// dataset when the grid is transductive.
GridResult grid_search(const Dataset& data, std::span<const Index> rows, Method method,
                       const GridSpec& grid);

/// v-vector for `x` under `g`, with the measure and normalization taken from `reference`.
VWeights weights_for(const FeatureMatrix& x, const FeatureMatrix& reference, const GKernelSpec& g,
                     const WeightRecipe& recipe);
/// V-matrix over `x` with the measure built from `reference`.
VMatrix v_matrix_for(const FeatureMatrix& x, const FeatureMatrix& reference, const GKernelSpec& g,
                     const WeightRecipe& recipe);
/// Vac weights for `x` with normalization fixed by `reference`.
Vector vac_weights(const FeatureMatrix& x, const FeatureMatrix& reference, const VacRecipe& recipe);

/// Fits `method` at one grid cell. Weights are referenced to `reference` (all samples
/// in the transductive setting) or to the training set when it is null.
Model fit_model(const Dataset& train, Method method, const GridCell& cell, const FitOptions& options,
                const FeatureMatrix* reference = nullptr);

/// One row per cell per fold.
std::string score_table_csv(const GridResult& result);

}  // namespace cdfsvm
