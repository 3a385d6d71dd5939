#include "cdfsvm/bench.hpp"

#include "cdfsvm/io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace cdfsvm {

namespace {

std::string fixed(double x, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

GridSpec single_cell(const GridSpec& grid, const GridCell& cell) {
  GridSpec g = grid;
  g.gammas = {cell.gamma};
  g.deltas = {cell.delta > 0.0 ? cell.delta : 1.0};
  g.epsilons = {cell.epsilon};
  g.sigmas.clear();
  g.include_step = false;
  if (cell.g) {
    if (cell.g->kind == GKernelSpec::Kind::step) {
      g.include_step = true;
    } else {
      g.sigmas = {cell.g->sigma};
    }
  } else {
    g.include_step = true;
  }
  return g;
}

}  // namespace

BenchMethod parse_bench_method(const std::string& text) {
  if (text == "bayes") return BenchMethod::bayes();
  return {parse_method(text)};
}

GridSpec bayes_bench_grid() {
  GridSpec g;
  g.gammas = powers_of_two(-4, 4);
  g.deltas = {1.0};
  g.epsilons = powers_of_two(-4, -2);
  g.sigmas = powers_of_two(-4, 4);
  g.include_step = false;
  g.fit.kernel = KernelSpec::Kind::linear;
  g.fit.weights.mu = MeasureSpec::Kind::uniform_box;
  g.fit.weights.combine = Combine::product;
  return g;
}

std::uint64_t repetition_seed(std::uint64_t seed, Index n, int rep) {
  // splitmix64 over the packed triple.
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(n) * 1000003ULL +
                    static_cast<std::uint64_t>(rep);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

const BayesColumn* BayesBenchResult::find(Index n, const std::string& method,
                                          Indicator indicator) const {
  for (const auto& c : columns) {
    if (c.n == n && c.method == method && c.indicator == indicator) return &c;
  }
  return nullptr;
}

bool BayesBenchResult::complete() const {
  return std::none_of(columns.begin(), columns.end(),
                      [](const BayesColumn& c) { return c.aborted || c.failures > 0; });
}

BayesBenchResult run_bayes_bench(const BayesBenchConfig& cfg, const Progress& progress) {
  if (cfg.repetitions < 1) throw InvalidArgument("repetitions must be positive");
  if (cfg.methods.empty()) throw InvalidArgument("no methods requested");
  if (cfg.indicators.empty()) throw InvalidArgument("no indicators requested");
  cfg.grid.validate();
  BayesBenchResult result;
  result.k0 = cfg.model.bayes_slope();
  result.q0 = cfg.model.bayes_intercept();

  for (Index n : cfg.sizes) {
    for (const auto& m : cfg.methods) {
      for (Indicator ind : cfg.indicators) {
        BayesColumn c;
        c.n = n;
        c.method = m.name();
        c.indicator = ind;
        result.columns.push_back(std::move(c));
      }
    }
  }
  std::vector<int> streak(result.columns.size(), 0);
  const std::size_t per_method = cfg.indicators.size();

  std::size_t base_col = 0;
  for (Index n : cfg.sizes) {
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
      GaussianSpec2D spec = cfg.model;
      spec.n = n;
      spec.seed = repetition_seed(cfg.seed, n, rep);
      const Dataset data = gen_gaussian_2d(spec);
      for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        const BenchMethod& bm = cfg.methods[mi];
        const std::size_t first = base_col + mi * per_method;
        bool any_open = false;
        for (std::size_t ii = 0; ii < per_method; ++ii) {
          any_open = any_open || !result.columns[first + ii].aborted;
        }
        if (!any_open) continue;

        std::optional<GridResult> search;
        std::string search_error;
        if (bm.method) {
          GridSpec grid = cfg.grid;
          grid.seed = spec.seed;
          try {
            search = grid_search(data, *bm.method, grid);
          } catch (const std::exception& e) {
            search_error = e.what();
          }
        }
        for (std::size_t ii = 0; ii < per_method; ++ii) {
          BayesColumn& col = result.columns[first + ii];
          if (col.aborted) continue;
          BayesRun run;
          run.n = n;
          run.repetition = rep;
          run.method = bm.name();
          run.indicator = cfg.indicators[ii];
          try {
            if (!bm.method) {
              run.k = result.k0;
              run.q = result.q0;
              run.cell = "analytic";
            } else {
              if (!search) throw Error(search_error);
              const CellScore& best = search->best(run.indicator);
              const Model model =
                  fit_model(data, *bm.method, best.cell, cfg.grid.fit, &data.features());
              const BoundaryLine line = boundary_from_linear(base(model), data.scaler());
              if (!std::isfinite(line.k) || !std::isfinite(line.q)) {
                throw Error("boundary is not finite");
              }
              run.k = line.k;
              run.q = line.q;
              run.cell = best.cell.describe();
            }
            run.ok = true;
            col.ks.push_back(run.k);
            col.qs.push_back(run.q);
            streak[first + ii] = 0;
          } catch (const std::exception& e) {
            run.error = e.what();
            col.last_error = run.error;
            ++col.failures;
            if (++streak[first + ii] >= cfg.max_consecutive_failures) col.aborted = true;
          }
          result.runs.push_back(std::move(run));
        }
      }
      if (progress) {
        progress("n=" + std::to_string(n) + " repetition " + std::to_string(rep + 1) + "/" +
                 std::to_string(cfg.repetitions));
      }
    }
    base_col += cfg.methods.size() * per_method;
  }
  return result;
}

std::string format_bayes_table(const BayesBenchResult& result) {
  std::ostringstream os;
  std::vector<Index> sizes;
  for (const auto& c : result.columns) {
    if (std::find(sizes.begin(), sizes.end(), c.n) == sizes.end()) sizes.push_back(c.n);
  }
  for (Index n : sizes) {
    os << "n = " << n << "\n";
    os << pad("method", 14) << pad("indicator", 11) << pad("Dist", 10) << pad("k", 18)
       << pad("q", 18) << "runs\n";
    for (const auto& c : result.columns) {
      if (c.n != n) continue;
      os << pad(c.method, 14) << pad(to_string(c.indicator), 11);
      if (c.has_stats()) {
        os << pad(fixed(c.dist(result.k0, result.q0), 4), 10)
           << pad(fixed(mean(c.ks), 2) + "+-" + fixed(sample_sd(c.ks), 2), 18)
           << pad(fixed(mean(c.qs), 2) + "+-" + fixed(sample_sd(c.qs), 2), 18);
      } else {
        os << pad("-", 10) << pad("-", 18) << pad("-", 18);
      }
      os << c.ks.size();
      if (c.aborted) os << " (aborted: " << c.last_error << ")";
      os << "\n";
    }
    os << "\n";
  }
  return os.str();
}

std::string bayes_runs_csv(const BayesBenchResult& result) {
  std::ostringstream os;
  os << "n,repetition,method,indicator,ok,k,q,cell,error\n";
  for (const auto& r : result.runs) {
    os << r.n << ',' << r.repetition << ',' << r.method << ',' << to_string(r.indicator) << ','
       << (r.ok ? 1 : 0) << ',' << format_double(r.k) << ',' << format_double(r.q) << ','
       << quoted(r.cell) << ',' << quoted(r.error) << '\n';
  }
  return os.str();
}

std::string bayes_summary_csv(const BayesBenchResult& result) {
  std::ostringstream os;
  os << "n,method,indicator,runs,failures,dist,k_mean,k_sd,q_mean,q_sd\n";
  for (const auto& c : result.columns) {
    os << c.n << ',' << c.method << ',' << to_string(c.indicator) << ',' << c.ks.size() << ','
       << c.failures;
    if (c.has_stats()) {
      os << ',' << format_double(c.dist(result.k0, result.q0)) << ',' << format_double(mean(c.ks))
         << ',' << format_double(sample_sd(c.ks)) << ',' << format_double(mean(c.qs)) << ','
         << format_double(sample_sd(c.qs));
    } else {
      os << ",,,,,";
    }
    os << '\n';
  }
  return os.str();
}

const UciEntry* UciBenchResult::find(const std::string& dataset, const std::string& method) const {
  for (const auto& e : entries) {
    if (e.dataset == dataset && e.method == method) return &e;
  }
  return nullptr;
}

bool UciBenchResult::complete() const {
  return std::all_of(entries.begin(), entries.end(), [](const UciEntry& e) { return e.ok; });
}

std::vector<UciEntry> run_uci_dataset(const Dataset& data, const UciBenchConfig& cfg,
                                      const Progress& progress) {
  if (cfg.repetitions < 1) throw InvalidArgument("repetitions must be positive");
  std::vector<UciEntry> out;
  for (Method m : cfg.methods) {
    UciEntry e;
    e.dataset = data.name();
    e.method = to_string(m);
    try {
      const GridResult search = grid_search(data, m, cfg.grid);
      const CellScore& best = search.best(cfg.grid.indicator);
      e.cell = best.cell.describe();
      std::vector<double> gms;
      std::vector<double> accs;
      for (int r = 0; r < cfg.repetitions; ++r) {
        GridSpec one = single_cell(cfg.grid, best.cell);
        one.seed = cfg.grid.seed + 1 + static_cast<std::uint64_t>(r);
        const GridResult eval = grid_search(data, m, one);
        if (eval.cells.size() != 1 || !eval.cells[0].valid) {
          throw SolverError("evaluation of the selected cell failed: " +
                            (eval.cells.empty() ? std::string("no cell") : eval.cells[0].error));
        }
        gms.push_back(eval.cells[0].gmean);
        accs.push_back(eval.cells[0].acc);
      }
      e.gmean_mean = mean(gms);
      e.gmean_sd = sample_sd(gms);
      e.acc_mean = mean(accs);
      e.acc_sd = sample_sd(accs);
      e.ok = true;
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
    if (progress) progress(e.dataset + " " + e.method + (e.ok ? " done" : " failed: " + e.error));
    out.push_back(std::move(e));
  }
  return out;
}

UciBenchResult run_uci_bench(const UciBenchConfig& cfg, const Progress& progress) {
  if (cfg.datasets.empty()) throw InvalidArgument("no datasets given");
  if (cfg.methods.empty()) throw InvalidArgument("no methods requested");
  UciBenchResult result;
  for (Method m : cfg.methods) result.methods.push_back(to_string(m));
  for (const auto& path : cfg.datasets) {
    try {
      const Dataset data = load_csv(path, cfg.csv);
      result.datasets.push_back(data.name());
      for (auto& e : run_uci_dataset(data, cfg, progress)) result.entries.push_back(std::move(e));
    } catch (const std::exception& ex) {
      // Unreadable dataset: one warning row.
      result.datasets.push_back(path);
      for (Method m : cfg.methods) {
        UciEntry e;
        e.dataset = path;
        e.method = to_string(m);
        e.error = ex.what();
        result.entries.push_back(std::move(e));
      }
      if (progress) progress("skipping " + path + ": " + ex.what());
    }
  }
  return result;
}

std::string format_uci_table(const UciBenchResult& result) {
  std::ostringstream os;
  std::size_t first = 8;
  for (const auto& d : result.datasets) first = std::max(first, d.size() + 2);
  os << pad("dataset", first);
  for (const auto& m : result.methods) os << pad(m, 22);
  os << "\n";
  for (const auto& d : result.datasets) {
    os << pad(d, first);
    for (const auto& m : result.methods) {
      const UciEntry* e = result.find(d, m);
      if (e == nullptr || !e->ok) {
        os << pad("failed", 22);
      } else {
        os << pad(fixed(100.0 * e->gmean_mean, 2) + "+-" + fixed(100.0 * e->gmean_sd, 2) + "(" +
                      fixed(100.0 * e->acc_mean, 2) + ")",
                  22);
      }
    }
    os << "\n";
  }
  return os.str();
}

std::string uci_csv(const UciBenchResult& result) {
  std::ostringstream os;
  os << "dataset,method,ok,gmean_mean,gmean_sd,acc_mean,acc_sd,cell,error\n";
  for (const auto& e : result.entries) {
    os << e.dataset << ',' << e.method << ',' << (e.ok ? 1 : 0) << ','
       << format_double(e.gmean_mean) << ',' << format_double(e.gmean_sd) << ','
       << format_double(e.acc_mean) << ',' << format_double(e.acc_sd) << ',' << quoted(e.cell)
       << ',' << quoted(e.error) << '\n';
  }
  return os.str();
}

}  // namespace cdfsvm
