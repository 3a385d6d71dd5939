#include "cdfsvm/modelsel.hpp"

#include "cdfsvm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace cdfsvm {

namespace {

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void check_positive(const std::vector<double>& v, const char* name) {
  if (v.empty()) throw InvalidArgument(std::string(name) + " grid is empty");
  for (double x : v) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw InvalidArgument(std::string(name) + " grid values must be positive");
    }
  }
}

FeatureMatrix rows_of(const FeatureMatrix& x, std::span<const Index> rows) {
  FeatureMatrix out(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = x.row(rows[r]);
  return out;
}

Vector entries_of(const Vector& v, std::span<const Index> rows) {
  Vector out(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out[static_cast<Index>(r)] = v[rows[r]];
  return out;
}

std::vector<Fold> deal(const std::vector<Index>& order, int folds) {
  std::vector<Fold> out(static_cast<std::size_t>(folds));
  std::vector<int> owner(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) {
    owner[static_cast<std::size_t>(order[p])] = static_cast<int>(p % static_cast<std::size_t>(folds));
  }
  for (std::size_t i = 0; i < owner.size(); ++i) {
    for (int f = 0; f < folds; ++f) {
      auto& fold = out[static_cast<std::size_t>(f)];
      (owner[i] == f ? fold.test : fold.train).push_back(static_cast<Index>(i));
    }
  }
  return out;
}

void check_folds(Index m, int folds) {
  if (folds < 2) throw InvalidArgument("cross-validation needs at least two folds");
  if (folds > m) {
    throw InvalidArgument("cannot split " + std::to_string(m) + " samples into " +
                          std::to_string(folds) + " folds");
  }
}

// Per-fold blocks shared by every cell of a search.
struct FoldData {
  Vector y_train;
  std::vector<int> y_test;
  std::vector<Matrix> k_train;  // per kernel
  std::vector<Matrix> k_test;   // per kernel, test x train
  std::vector<Vector> v;        // per G option
  std::vector<Matrix> vm;       // per G option
  Vector vac;
  Vector rho;
  std::string setup_error;
};

}  // namespace

std::string to_string(Indicator indicator) { return indicator == Indicator::acc ? "acc" : "vac"; }

Indicator parse_indicator(const std::string& text) {
  if (text == "acc") return Indicator::acc;
  if (text == "vac") return Indicator::vac;
  throw InvalidArgument("unknown indicator '" + text + "' (expected acc or vac)");
}

MeasureSpec build_measure(MeasureSpec::Kind kind, const FeatureMatrix& reference) {
  switch (kind) {
    case MeasureSpec::Kind::uniform_box: return MeasureSpec::unit_box(reference.cols());
    case MeasureSpec::Kind::gaussian: return MeasureSpec::gaussian_fit(reference);
    case MeasureSpec::Kind::empirical: return MeasureSpec::empirical(reference);
    case MeasureSpec::Kind::point_mass: return MeasureSpec::point_mass();
  }
  throw InvalidArgument("unknown measure kind");
}

std::string WeightRecipe::describe() const {
  return "mu=" + to_string(mu) + ";combine=" + to_string(combine);
}

std::string VacRecipe::describe() const {
  return "G=" + g.describe() + ";mu=" + to_string(mu) + ";combine=" + to_string(combine);
}

KernelSpec GridCell::kernel(KernelSpec::Kind kind) const {
  return kind == KernelSpec::Kind::linear ? KernelSpec::linear() : KernelSpec::rbf(delta);
}

std::string GridCell::describe() const {
  std::ostringstream os;
  os << "gamma=" << gamma << " delta=" << delta << " epsilon=" << epsilon
     << " G=" << (g ? g->describe() : std::string("-"));
  return os.str();
}

std::vector<double> powers_of_two(int lo, int hi) {
  std::vector<double> out;
  for (int e = lo; e <= hi; ++e) out.push_back(std::ldexp(1.0, e));
  return out;
}

void GridSpec::validate() const {
  check_positive(gammas, "gamma");
  if (fit.kernel == KernelSpec::Kind::rbf) check_positive(deltas, "delta");
  if (!epsilons.empty()) {
    for (double e : epsilons) {
      if (!(e >= 0.0) || !std::isfinite(e)) throw InvalidArgument("epsilon values must be >= 0");
    }
  }
  for (double s : sigmas) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("sigma values must be positive");
  }
  if (folds < 2) throw InvalidArgument("folds must be at least 2");
  if (!(fit.tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (fit.neighbours < 1) throw InvalidArgument("neighbour count must be positive");
}

std::vector<GridCell> enumerate_cells(Method method, const GridSpec& grid) {
  grid.validate();
  const auto gammas = sorted_unique(grid.gammas);
  const auto deltas = grid.fit.kernel == KernelSpec::Kind::rbf ? sorted_unique(grid.deltas)
                                                               : std::vector<double>{0.0};
  std::vector<double> epsilons{0.0};
  if (uses_epsilon(method)) {
    epsilons = sorted_unique(grid.epsilons);
    if (epsilons.empty()) throw InvalidArgument("epsilon grid is empty");
  }
  std::vector<std::optional<GKernelSpec>> gs{std::nullopt};
  if (uses_weights(method)) {
    gs.clear();
    if (grid.include_step) gs.emplace_back(GKernelSpec::step());
    for (double s : sorted_unique(grid.sigmas)) gs.emplace_back(GKernelSpec::gaussian(s));
    if (gs.empty()) throw InvalidArgument("no G kernel options in the grid");
  }
  std::vector<GridCell> cells;
  cells.reserve(gammas.size() * deltas.size() * epsilons.size() * gs.size());
  for (double gamma : gammas) {
    for (double delta : deltas) {
      for (double eps : epsilons) {
        for (const auto& g : gs) cells.push_back({gamma, delta, eps, g});
      }
    }
  }
  return cells;
}

std::vector<Fold> kfold_split(Index m, int folds, std::uint64_t seed) {
  check_folds(m, folds);
  std::vector<Index> order = iota_indices(m);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return deal(order, folds);
}

std::vector<Fold> kfold_split(const Vector& labels, int folds, std::uint64_t seed) {
  check_folds(labels.size(), folds);
  std::mt19937_64 rng(seed);
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(labels.size()));
  for (double cls : {0.0, 1.0}) {
    std::vector<Index> members;
    for (Index i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    std::shuffle(members.begin(), members.end(), rng);
    order.insert(order.end(), members.begin(), members.end());
  }
  if (static_cast<Index>(order.size()) != labels.size()) {
    throw InvalidArgument("stratified split needs labels in {0,1}");
  }
  return deal(order, folds);
}

Index GridResult::best_index(Indicator indicator) const {
  Index best = -1;
  double top = -1.0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (!cells[c].valid) continue;
    const double s = cells[c].score(indicator);
    if (s > top) {
      top = s;
      best = static_cast<Index>(c);
    }
  }
  return best;
}

const CellScore& GridResult::best(Indicator indicator) const {
  const Index b = best_index(indicator);
  if (b < 0) {
    std::string why = cells.empty() ? std::string("empty grid") : cells.front().error;
    throw SolverError("no grid cell produced a valid fit for " + to_string(method) + ": " + why);
  }
  return cells[static_cast<std::size_t>(b)];
}

VWeights weights_for(const FeatureMatrix& x, const FeatureMatrix& reference, const GKernelSpec& g,
                     const WeightRecipe& recipe) {
  const MeasureSpec mu = build_measure(recipe.mu, reference);
  VWeights fitted = v_vector(reference, g, mu, recipe.combine);
  if (&x != &reference) fitted.values = v_values(fitted, x);
  return fitted;
}

VMatrix v_matrix_for(const FeatureMatrix& x, const FeatureMatrix& reference, const GKernelSpec& g,
                     const WeightRecipe& recipe) {
  return v_matrix(x, g, build_measure(recipe.mu, reference), recipe.combine);
}

Vector vac_weights(const FeatureMatrix& x, const FeatureMatrix& reference, const VacRecipe& recipe) {
  const MeasureSpec mu = build_measure(recipe.mu, reference);
  const VWeights fitted = v_vector(reference, recipe.g, mu, recipe.combine);
  return &x == &reference ? fitted.values : v_values(fitted, x);
}

Model fit_model(const Dataset& train, Method method, const GridCell& cell, const FitOptions& options,
                const FeatureMatrix* reference) {
  const GramMatrix k = gram(cell.kernel(options.kernel), train.features());
  SolverConfig cfg;
  cfg.gamma = cell.gamma;
  cfg.epsilon = cell.epsilon;
  cfg.tolerance = options.tolerance;
  cfg.max_iterations = options.max_iterations;
  cfg.seed = options.seed;
  const FeatureMatrix& ref = reference ? *reference : train.features();
  if (uses_weights(method) && !cell.g) {
    throw InvalidArgument(to_string(method) + " needs a G kernel");
  }
  switch (method) {
    case Method::csvm: return fit_csvm(train, k, cell.gamma, cfg);
    case Method::lssvm: return fit_lssvm(train, k, cell.gamma);
    case Method::idlssvm: return fit_idlssvm(train, k, cell.gamma, options.neighbours);
    case Method::eps_l1svm: return fit_eps_l1_svm(train, k, cfg);
    case Method::eps_l1vsvm:
      return fit_eps_l1_vsvm(train, k, weights_for(train.features(), ref, *cell.g, options.weights),
                             cfg);
    case Method::vsvm:
      return fit_vsvm(train, k, v_matrix_for(train.features(), ref, *cell.g, options.weights),
                      cell.gamma);
  }
  throw InvalidArgument("unknown method");
}

GridResult grid_search(const Dataset& data, Method method, const GridSpec& grid) {
  const auto all = iota_indices(data.size());
  return grid_search(data, all, method, grid);
}

GridResult grid_search(const Dataset& data, std::span<const Index> rows, Method method,
                       const GridSpec& grid) {
  const std::vector<GridCell> cells = enumerate_cells(method, grid);
  const FeatureMatrix x = rows_of(data.features(), rows);
  const Vector y = entries_of(data.labels(), rows);
  const std::vector<Fold> folds = kfold_split(y, grid.folds, grid.seed);
  const auto nf = folds.size();

  std::vector<double> deltas{0.0};
  if (grid.fit.kernel == KernelSpec::Kind::rbf) deltas = sorted_unique(grid.deltas);
  std::vector<GKernelSpec> gopts;
  for (const auto& c : cells) {
    if (c.g && std::find(gopts.begin(), gopts.end(), *c.g) == gopts.end()) gopts.push_back(*c.g);
  }
  auto delta_index = [&](double d) {
    return static_cast<std::size_t>(std::find(deltas.begin(), deltas.end(), d) - deltas.begin());
  };
  auto g_index = [&](const GKernelSpec& g) {
    return static_cast<std::size_t>(std::find(gopts.begin(), gopts.end(), g) - gopts.begin());
  };

  std::vector<Matrix> grams;
  for (double d : deltas) {
    GridCell probe;
    probe.delta = d;
    grams.push_back(gram(probe.kernel(grid.fit.kernel), x).values());
  }

  // Full-sample weights in the transductive setting; errors mark the affected G invalid.
  std::vector<Vector> v_full(gopts.size());
  std::vector<Matrix> vm_full(gopts.size());
  std::vector<std::string> g_error(gopts.size());
  Vector vac_full;
  std::string vac_error;
  if (grid.transductive) {
    for (std::size_t gi = 0; gi < gopts.size(); ++gi) {
      try {
        if (method == Method::eps_l1vsvm) {
          v_full[gi] = weights_for(x, data.features(), gopts[gi], grid.fit.weights).values;
        } else {
          vm_full[gi] = v_matrix_for(x, data.features(), gopts[gi], grid.fit.weights).values;
        }
      } catch (const Error& e) {
        g_error[gi] = e.what();
      }
    }
    try {
      vac_full = vac_weights(x, data.features(), grid.vac);
    } catch (const Error& e) {
      vac_error = e.what();
    }
  }

  std::vector<FoldData> fd(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const Fold& fold = folds[f];
    FoldData& d = fd[f];
    d.y_train = entries_of(y, fold.train);
    d.y_test = to_labels(entries_of(y, fold.test));
    for (const Matrix& k : grams) {
      d.k_train.push_back(kernel_block(k, fold.train, fold.train));
      d.k_test.push_back(kernel_block(k, fold.test, fold.train));
    }
    const FeatureMatrix xtr = rows_of(x, fold.train);
    const FeatureMatrix xte = rows_of(x, fold.test);
    d.v.resize(gopts.size());
    d.vm.resize(gopts.size());
    for (std::size_t gi = 0; gi < gopts.size(); ++gi) {
      if (!g_error[gi].empty()) continue;
      try {
        if (method == Method::eps_l1vsvm) {
          d.v[gi] = grid.transductive ? entries_of(v_full[gi], fold.train)
                                      : weights_for(xtr, xtr, gopts[gi], grid.fit.weights).values;
        } else {
          d.vm[gi] = grid.transductive ? kernel_block(vm_full[gi], fold.train, fold.train)
                                       : v_matrix_for(xtr, xtr, gopts[gi], grid.fit.weights).values;
        }
      } catch (const Error& e) {
        g_error[gi] = e.what();
      }
    }
    try {
      if (!vac_error.empty()) throw Error(vac_error);
      d.vac = grid.transductive ? entries_of(vac_full, fold.test) : vac_weights(xte, xtr, grid.vac);
      if (method == Method::idlssvm) d.rho = density_weights(xtr, d.y_train, grid.fit.neighbours);
    } catch (const Error& e) {
      d.setup_error = e.what();
    }
  }

  GridResult result;
  result.method = method;
  result.vac_provenance = grid.vac.describe();
  result.cells.resize(cells.size());
  result.folds.resize(cells.size() * nf);

  const auto ncells = static_cast<long>(cells.size());
#pragma omp parallel for schedule(dynamic)
  for (long ci = 0; ci < ncells; ++ci) {
    const GridCell& cell = cells[static_cast<std::size_t>(ci)];
    CellScore& cs = result.cells[static_cast<std::size_t>(ci)];
    cs.cell = cell;
    cs.valid = true;
    const std::size_t ki = delta_index(grid.fit.kernel == KernelSpec::Kind::rbf ? cell.delta : 0.0);
    const std::size_t gi = cell.g ? g_index(*cell.g) : 0;
    SolverConfig cfg;
    cfg.gamma = cell.gamma;
    cfg.epsilon = cell.epsilon;
    cfg.tolerance = grid.fit.tolerance;
    cfg.max_iterations = grid.fit.max_iterations;
    cfg.seed = grid.seed;
    double acc = 0.0;
    double vsum = 0.0;
    double gm = 0.0;
    for (std::size_t f = 0; f < nf; ++f) {
      FoldScore& fs = result.folds[static_cast<std::size_t>(ci) * nf + f];
      fs.cell = ci;
      fs.fold = static_cast<int>(f);
      const FoldData& d = fd[f];
      try {
        if (!d.setup_error.empty()) throw Error(d.setup_error);
        if (cell.g && !g_error[gi].empty()) throw Error(g_error[gi]);
        const Matrix& ktr = d.k_train[ki];
        Vector coef;
        double offset = 0.0;
        switch (method) {
          case Method::csvm:
          case Method::eps_l1svm:
          case Method::eps_l1vsvm: {
            DualSolution s = method == Method::csvm
                                 ? solve_csvm(ktr, d.y_train, cfg)
                                 : solve_eps_l1(ktr, d.y_train,
                                                method == Method::eps_l1vsvm
                                                    ? d.v[gi]
                                                    : Vector::Ones(d.y_train.size()).eval(),
                                                cfg);
            fs.converged = s.converged;
            coef = std::move(s.coefficients);
            offset = s.bias;
            break;
          }
          case Method::lssvm:
          case Method::idlssvm:
          case Method::vsvm: {
            LinearSolution s =
                method == Method::lssvm   ? solve_lssvm(ktr, d.y_train, cell.gamma)
                : method == Method::idlssvm ? solve_weighted_lssvm(ktr, d.y_train, d.rho, cell.gamma)
                                            : solve_vsvm(ktr, d.vm[gi], d.y_train, cell.gamma);
            coef = std::move(s.coefficients);
            offset = s.offset;
            break;
          }
        }
        const Vector scores = (d.k_test[ki] * coef).array() + offset;
        const std::vector<int> pred = decide_all(scores);
        fs.acc = accuracy(d.y_test, pred);
        fs.vac = vac(d.y_test, pred, std::span<const double>(d.vac.data(), d.vac.size()));
        fs.gmean = gmean(d.y_test, pred);
        fs.valid = true;
      } catch (const std::exception& e) {
        fs.valid = false;
        if (cs.valid) cs.error = e.what();
        cs.valid = false;
      }
      if (!fs.converged) ++cs.unconverged;
      acc += fs.acc;
      vsum += fs.vac;
      gm += fs.gmean;
    }
    const auto n = static_cast<double>(nf);
    cs.acc = acc / n;
    cs.vac = vsum / n;
    cs.gmean = gm / n;
  }
  return result;
}

std::string score_table_csv(const GridResult& result) {
  std::ostringstream os;
  os.precision(10);
  os << "cell,fold,gamma,delta,epsilon,g,acc,vac,gmean,valid,converged\n";
  for (const FoldScore& f : result.folds) {
    const GridCell& c = result.cells[static_cast<std::size_t>(f.cell)].cell;
    os << f.cell << ',' << f.fold << ',' << c.gamma << ',' << c.delta << ',' << c.epsilon << ','
       << (c.g ? c.g->describe() : std::string("-")) << ',' << f.acc << ',' << f.vac << ','
       << f.gmean << ',' << (f.valid ? 1 : 0) << ',' << (f.converged ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace cdfsvm
