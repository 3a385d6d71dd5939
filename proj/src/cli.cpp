#include "cdfsvm/cli.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include "cdfsvm/bench.hpp"
#include "cdfsvm/datagen.hpp"
#include "cdfsvm/evaluation.hpp"
#include "cdfsvm/io.hpp"
#include "cdfsvm/modelsel.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

namespace cdfsvm {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw InvalidArgument("'" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + format_double(xs[i]);
  return out;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text, const std::string& source) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError(source + ":" + std::to_string(number) + ": expected key=value", number);
    }
    std::string key = trim(t.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (key.empty()) throw ParseError(source + ":" + std::to_string(number) + ": empty key", number);
    cfg.values_[key] = trim(t.substr(eq + 1));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) { return parse(read_file(path), path); }

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? to_double(key, get(key)) : fallback;
}

long RunConfig::get_long(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get(key);
  long v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw InvalidArgument("'" + key + "' expects an integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t RunConfig::get_seed(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get(key);
  std::uint64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw InvalidArgument("'" + key + "' expects a non-negative integer, got '" + s + "'");
  }
  return v;
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get(key);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw InvalidArgument("'" + key + "' expects true or false, got '" + s + "'");
}

std::vector<double> RunConfig::get_doubles(const std::string& key,
                                           const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(get(key))) out.push_back(to_double(key, item));
  if (out.empty()) throw InvalidArgument("'" + key + "' is an empty list");
  return out;
}

std::vector<std::string> RunConfig::get_strings(const std::string& key) const {
  return has(key) ? split_list(get(key)) : std::vector<std::string>{};
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

namespace {

struct OptionDef {
  const char* name;
  const char* help;
  bool flag = false;
};

const std::vector<OptionDef> kCommon{
    {"seed", "random seed"},
    {"out-dir", "directory for output files (default .)"},
};

const std::vector<OptionDef> kCsv{
    {"label-column", "zero-based label column, negative counts from the end (default -1)"},
    {"positive-label", "label token mapped to class 1"},
};

const std::vector<OptionDef> kWeights{
    {"g-kernel", "G kernel: gaussian or step"},
    {"mu", "measure for the weights: empirical, uniform, gaussian or point"},
    {"combine", "per-dimension combination: product or additive"},
};

const std::vector<OptionDef> kGrid{
    {"kernel", "kernel: rbf or linear"},
    {"gammas", "comma list of gamma values"},
    {"deltas", "comma list of rbf widths"},
    {"epsilons", "comma list of tube widths"},
    {"sigmas", "comma list of gaussian G widths"},
    {"indicator", "selection indicator: acc or vac"},
    {"folds", "number of cross-validation folds"},
    {"tolerance", "solver stopping tolerance"},
    {"transductive", "reference weights to every sample (true/false)"},
};

struct Command {
  const char* name;
  const char* help;
  std::vector<OptionDef> options;
};

std::vector<OptionDef> concat(std::initializer_list<std::vector<OptionDef>> parts) {
  std::vector<OptionDef> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

const std::vector<Command>& commands() {
  static const std::vector<Command> cmds{
      {"synth", "generate a synthetic dataset",
       concat({kCommon,
               {{"generator", "gaussian2d, robust1d or monk3"},
                {"n", "number of samples"},
                {"noise", "label noise fraction (monk3)"},
                {"out", "output CSV path (default <out-dir>/synth.csv)"}}})},
      {"fit", "fit one model on a train split and evaluate it",
       concat({kCommon, kCsv, kWeights,
               {{"dataset", "training CSV"},
                {"test", "test CSV; default is a stratified split"},
                {"test-fraction", "held-out fraction when no test file is given (default 0.2)"},
                {"method", "csvm, lssvm, vsvm, idlssvm, eps-l1svm or eps-l1vsvm"},
                {"kernel", "kernel: rbf or linear"},
                {"gamma", "regularization value"},
                {"delta", "rbf width"},
                {"epsilon", "tube width"},
                {"sigma", "gaussian G width"},
                {"tolerance", "solver stopping tolerance"},
                {"v-ones", "use unit weights (point measure)", true}}})},
      {"predict", "score a CSV with a stored model",
       concat({kCommon, kCsv, {{"model", "model JSON"}, {"dataset", "labelled CSV to score"}}})},
      {"cv", "grid search with cross-validation",
       concat({kCommon, kCsv, kWeights, kGrid,
               {{"dataset", "CSV dataset"}, {"method", "method to tune"}}})},
      {"bench-bayes", "slope/intercept study against the Bayes line",
       concat({kCommon, kWeights, kGrid,
               {{"method", "comma list of methods, 'bayes' for the analytic rule"},
                {"n", "comma list of sample sizes"},
                {"repetitions", "repetitions per size"}}})},
      {"bench-uci", "cross-validated benchmark on CSV datasets",
       concat({kCommon, kCsv, kWeights, kGrid,
               {{"dataset", "comma list of CSV paths"},
                {"method", "comma list of methods"},
                {"repetitions", "repeated 10-fold evaluations of the selected cell"}}})},
  };
  return cmds;
}

const Command& find_command(const std::string& name) {
  for (const auto& c : commands()) {
    if (name == c.name) return c;
  }
  throw InvalidArgument("unknown command '" + name + "'");
}

struct Context {
  RunConfig cfg;
  std::ostream& out;
  std::ostream& err;
  std::string out_dir;
  std::string command;
};

std::string output_path(const Context& ctx, const std::string& file) {
  return (std::filesystem::path(ctx.out_dir) / file).string();
}

Provenance base_provenance(const Context& ctx) {
  Provenance p{{"command", ctx.command}};
  for (const auto& [k, v] : ctx.cfg.values()) {
    if (k != "out-dir" && k != "out") p.emplace_back(k, v);
  }
  return p;
}

CsvOptions csv_options(const RunConfig& cfg) {
  CsvOptions o;
  o.label_column = static_cast<int>(cfg.get_long("label-column", -1));
  o.positive_label = cfg.get("positive-label");
  return o;
}

KernelSpec::Kind kernel_kind(const RunConfig& cfg, KernelSpec::Kind fallback) {
  if (!cfg.has("kernel")) return fallback;
  const std::string k = cfg.get("kernel");
  if (k == "rbf") return KernelSpec::Kind::rbf;
  if (k == "linear") return KernelSpec::Kind::linear;
  throw InvalidArgument("kernel must be rbf or linear, got '" + k + "'");
}

WeightRecipe weight_recipe(const RunConfig& cfg, WeightRecipe fallback) {
  if (cfg.has("mu")) fallback.mu = parse_measure_kind(cfg.get("mu"));
  if (cfg.has("combine")) fallback.combine = parse_combine(cfg.get("combine"));
  return fallback;
}

std::string require(const RunConfig& cfg, const std::string& key) {
  if (!cfg.has(key) || cfg.get(key).empty()) throw InvalidArgument("--" + key + " is required");
  return cfg.get(key);
}

void apply_grid(const RunConfig& cfg, GridSpec& grid) {
  grid.fit.kernel = kernel_kind(cfg, grid.fit.kernel);
  grid.fit.weights = weight_recipe(cfg, grid.fit.weights);
  grid.fit.tolerance = cfg.get_double("tolerance", grid.fit.tolerance);
  grid.gammas = cfg.get_doubles("gammas", grid.gammas);
  grid.deltas = cfg.get_doubles("deltas", grid.deltas);
  grid.epsilons = cfg.get_doubles("epsilons", grid.epsilons);
  grid.sigmas = cfg.get_doubles("sigmas", grid.sigmas);
  if (cfg.has("g-kernel")) {
    const std::string g = cfg.get("g-kernel");
    if (g == "step") {
      grid.include_step = true;
      grid.sigmas.clear();
    } else if (g == "gaussian") {
      grid.include_step = false;
    } else {
      throw InvalidArgument("g-kernel must be gaussian or step, got '" + g + "'");
    }
  }
  if (cfg.has("indicator")) grid.indicator = parse_indicator(cfg.get("indicator"));
  grid.folds = static_cast<int>(cfg.get_long("folds", grid.folds));
  grid.transductive = cfg.get_bool("transductive", grid.transductive);
  grid.seed = cfg.get_seed("seed", grid.seed);
  grid.fit.seed = grid.seed;
  grid.validate();
}

void write_outputs(const std::vector<std::pair<std::string, std::string>>& files) {
  for (const auto& [path, content] : files) write_file_atomic(path, content);
}

// synth

int cmd_synth(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const std::string generator = c.get("generator", "gaussian2d");
  const std::uint64_t seed = c.get_seed("seed", 1);
  LabeledSamples s;
  std::string summary;
  if (generator == "gaussian2d") {
    GaussianSpec2D spec;
    spec.n = c.get_long("n", spec.n);
    spec.seed = seed;
    s = sample_gaussian_2d(spec);
    std::ostringstream os;
    os << "bayes line: x2 = " << spec.bayes_slope() << "*x1 + " << spec.bayes_intercept()
       << "\nbayes error: " << spec.bayes_error() << "\n";
    summary = os.str();
  } else if (generator == "robust1d") {
    Robustness1DSpec spec;
    spec.n = c.get_long("n", spec.n);
    spec.seed = seed;
    s = sample_robustness_1d(spec);
    std::ostringstream os;
    os << "posterior: P(y=1|x) = 1/(1+exp(" << 2.0 * spec.center / spec.variance << "*x))\n";
    summary = os.str();
  } else if (generator == "monk3") {
    if (c.has("n")) {
      s = monk3_sample(c.get_long("n", 0), c.get_double("noise", 0.0), seed);
    } else {
      s = monk3_full();
    }
    summary = "rule: (a5 = 3 and a4 = 1) or (a5 != 4 and a2 != 3)\n";
  } else {
    throw InvalidArgument("generator must be gaussian2d, robust1d or monk3, got '" + generator +
                          "'");
  }
  const std::string path = c.has("out") ? c.get("out") : output_path(ctx, "synth.csv");
  write_outputs({{path, provenance_header(base_provenance(ctx)) + format_csv(s.x, s.y)}});
  ctx.out << summary << "wrote " << s.x.rows() << " samples to " << path << "\n";
  return 0;
}

// fit

json report_json(const EvalReport& r) {
  return {{"acc", r.acc},
          {"vac", r.vac},
          {"gmean", r.gmean},
          {"sensitivity", r.sensitivity},
          {"specificity", r.specificity},
          {"tp", r.confusion.tp},
          {"fp", r.confusion.fp},
          {"tn", r.confusion.tn},
          {"fn", r.confusion.fn},
          {"v_provenance", r.v_provenance}};
}

std::string describe_report(const EvalReport& r) {
  std::ostringstream os;
  os << "acc=" << r.acc << " vac=" << r.vac << " gmean=" << r.gmean << " (tp=" << r.confusion.tp
     << " fp=" << r.confusion.fp << " tn=" << r.confusion.tn << " fn=" << r.confusion.fn << ")\n";
  return os.str();
}

// Stratified holdout: each class is shuffled and its first round(fraction * count) rows are held out.
std::pair<std::vector<Index>, std::vector<Index>> holdout_split(const Vector& y, double fraction,
                                                                 std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw InvalidArgument("test-fraction must be in (0,1)");
  std::mt19937_64 rng(seed);
  std::vector<Index> train;
  std::vector<Index> test;
  for (int label : {0, 1}) {
    std::vector<Index> rows;
    for (Index i = 0; i < y.size(); ++i) {
      if (static_cast<int>(y[i]) == label) rows.push_back(i);
    }
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto held = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(rows.size())));
    test.insert(test.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(held));
    train.insert(train.end(), rows.begin() + static_cast<std::ptrdiff_t>(held), rows.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  if (test.empty() || train.empty()) throw InvalidArgument("split leaves an empty train or test set");
  return {train, test};
}

FeatureMatrix stack(const FeatureMatrix& a, const FeatureMatrix& b) {
  FeatureMatrix out(a.rows() + b.rows(), a.cols());
  out << a, b;
  return out;
}

int cmd_fit(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const Method method = parse_method(c.get("method", "eps-l1vsvm"));
  const CsvOptions csv = csv_options(c);
  const std::uint64_t seed = c.get_seed("seed", 0);
  const Dataset all = load_csv(require(c, "dataset"), csv);

  std::optional<Dataset> train;
  std::optional<Dataset> test;
  if (c.has("test")) {
    CsvOptions tcsv = csv;
    tcsv.scaler = all.scaler();
    train = all;
    test = load_csv(c.get("test"), tcsv);
  } else {
    const auto [tr, te] = holdout_split(all.labels(), c.get_double("test-fraction", 0.2), seed);
    train = all.subset(tr);
    test = all.subset(te);
  }
  const FeatureMatrix reference = stack(train->features(), test->features());

  FitOptions opts;
  opts.kernel = kernel_kind(c, KernelSpec::Kind::rbf);
  opts.weights = weight_recipe(c, WeightRecipe{});
  opts.tolerance = c.get_double("tolerance", opts.tolerance);
  opts.seed = seed;
  GridCell cell;
  cell.gamma = c.get_double("gamma", 1.0);
  cell.delta = c.get_double("delta", 1.0);
  cell.epsilon = uses_epsilon(method) ? c.get_double("epsilon", 0.125) : 0.0;
  if (uses_weights(method)) {
    const std::string g = c.get("g-kernel", "gaussian");
    if (g == "step") {
      cell.g = GKernelSpec::step();
    } else if (g == "gaussian") {
      cell.g = GKernelSpec::gaussian(c.get_double("sigma", 1.0));
    } else {
      throw InvalidArgument("g-kernel must be gaussian or step, got '" + g + "'");
    }
  }
  if (c.get_bool("v-ones", false)) opts.weights.mu = MeasureSpec::Kind::point_mass;

  const Model model = fit_model(*train, method, cell, opts, &reference);
  const Vector scores = predict(model, test->features());
  const auto y_true = to_labels(test->labels());
  const auto y_pred = decide_all(scores);
  const VacRecipe vr;
  const Vector vt = vac_weights(test->features(), reference, vr);
  const EvalReport report =
      evaluate(y_true, y_pred, std::span<const double>(vt.data(), vt.size()), vr.describe());

  json doc = report_json(report);
  doc["method"] = to_string(method);
  doc["cell"] = cell.describe();
  doc["weights"] = opts.weights.describe();
  doc["n_train"] = train->size();
  doc["n_test"] = test->size();
  doc["provenance"] = json::object();
  for (const auto& [k, v] : base_provenance(ctx)) doc["provenance"][k] = v;
  if (const auto* d = std::get_if<DualModel>(&model); d != nullptr && !d->converged) {
    ctx.err << "warning: solver stopped at the iteration cap (violation " << d->violation << ")\n";
  }
  write_outputs({{output_path(ctx, "model.json"), model_to_json(model, train->scaler())},
                 {output_path(ctx, "report.json"), doc.dump(2) + "\n"},
                 {output_path(ctx, "fit.conf"), c.to_text()}});
  ctx.out << to_string(method) << " " << cell.describe() << "\n" << describe_report(report);
  return 0;
}

// predict

int cmd_predict(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const StoredModel stored = model_from_json(read_file(require(c, "model")));
  const LabeledSamples raw = read_csv(require(c, "dataset"), csv_options(c));
  if (raw.x.cols() != stored.scaler.dim()) {
    throw InvalidArgument("dataset has " + std::to_string(raw.x.cols()) +
                          " features but the model expects " + std::to_string(stored.scaler.dim()));
  }
  const FeatureMatrix x = stored.scaler.transform(raw.x);
  const Vector scores = predict(stored.model, x);
  const auto y_pred = decide_all(scores);
  const auto y_true = to_labels(raw.y);
  const VacRecipe vr;
  const Vector vt = vac_weights(x, x, vr);
  const EvalReport report =
      evaluate(y_true, y_pred, std::span<const double>(vt.data(), vt.size()), vr.describe());

  std::string csv = provenance_header(base_provenance(ctx)) + "index,score,predicted,label\n";
  for (Index i = 0; i < scores.size(); ++i) {
    csv += std::to_string(i) + "," + format_double(scores[i]) + "," +
           std::to_string(y_pred[static_cast<std::size_t>(i)]) + "," +
           std::to_string(y_true[static_cast<std::size_t>(i)]) + "\n";
  }
  write_outputs({{output_path(ctx, "predictions.csv"), csv}});
  ctx.out << describe_report(report);
  return 0;
}

// cv

int cmd_cv(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const Method method = parse_method(c.get("method", "eps-l1vsvm"));
  const Dataset data = load_csv(require(c, "dataset"), csv_options(c));
  GridSpec grid;
  apply_grid(c, grid);
  const GridResult result = grid_search(data, method, grid);
  const Index best = result.best_index(grid.indicator);
  Provenance prov = base_provenance(ctx);
  prov.emplace_back("grid.method", to_string(method));
  prov.emplace_back("grid.gammas", join(grid.gammas));
  prov.emplace_back("grid.epsilons", join(grid.epsilons));
  prov.emplace_back("weights", grid.fit.weights.describe());
  prov.emplace_back("vac", result.vac_provenance);

  json doc;
  doc["method"] = to_string(method);
  doc["indicator"] = to_string(grid.indicator);
  doc["cells"] = result.cells.size();
  int invalid = 0;
  for (const auto& cs : result.cells) invalid += cs.valid ? 0 : 1;
  doc["invalid_cells"] = invalid;
  if (best >= 0) {
    const CellScore& b = result.cells[static_cast<std::size_t>(best)];
    doc["best"] = {{"cell", b.cell.describe()},
                   {"gamma", b.cell.gamma},
                   {"delta", b.cell.delta},
                   {"epsilon", b.cell.epsilon},
                   {"g", b.cell.g ? b.cell.g->describe() : std::string("-")},
                   {"acc", b.acc},
                   {"vac", b.vac},
                   {"gmean", b.gmean}};
  }
  write_outputs({{output_path(ctx, "cv_scores.csv"),
                  provenance_header(prov) + score_table_csv(result)},
                 {output_path(ctx, "cv_best.json"), doc.dump(2) + "\n"},
                 {output_path(ctx, "cv.conf"), c.to_text()}});
  if (best < 0) {
    ctx.err << "error: no grid cell produced a valid score\n";
    return 1;
  }
  const CellScore& b = result.cells[static_cast<std::size_t>(best)];
  ctx.out << "best " << b.cell.describe() << " acc=" << b.acc << " vac=" << b.vac
          << " gmean=" << b.gmean << "\n";
  return 0;
}

// bench-bayes

int cmd_bench_bayes(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  BayesBenchConfig bc;
  apply_grid(c, bc.grid);
  if (bc.grid.fit.kernel != KernelSpec::Kind::linear) {
    throw InvalidArgument("bench-bayes needs the linear kernel to read off a boundary line");
  }
  bc.seed = c.get_seed("seed", 1);
  bc.repetitions = static_cast<int>(c.get_long("repetitions", bc.repetitions));
  if (c.has("n")) {
    bc.sizes.clear();
    for (double n : c.get_doubles("n", {})) bc.sizes.push_back(static_cast<Index>(n));
  }
  const auto names = c.get_strings("method");
  if (names.empty()) {
    bc.methods.push_back(BenchMethod::bayes());
    for (Method m : all_methods()) bc.methods.push_back({m});
  } else {
    for (const auto& n : names) bc.methods.push_back(parse_bench_method(n));
  }
  if (c.has("indicator")) bc.indicators = {parse_indicator(c.get("indicator"))};

  const BayesBenchResult result =
      run_bayes_bench(bc, [&](const std::string& msg) { ctx.err << msg << "\n"; });
  Provenance prov = base_provenance(ctx);
  prov.emplace_back("grid.gammas", join(bc.grid.gammas));
  prov.emplace_back("grid.epsilons", join(bc.grid.epsilons));
  prov.emplace_back("grid.sigmas", join(bc.grid.sigmas));
  prov.emplace_back("weights", bc.grid.fit.weights.describe());
  prov.emplace_back("seed", std::to_string(bc.seed));
  const std::string header = provenance_header(prov);
  const std::string table = format_bayes_table(result);
  write_outputs({{output_path(ctx, "bayes_table.txt"), header + table},
                 {output_path(ctx, "bayes_runs.csv"), header + bayes_runs_csv(result)},
                 {output_path(ctx, "bayes_summary.csv"), header + bayes_summary_csv(result)},
                 {output_path(ctx, "bench-bayes.conf"), c.to_text()}});
  ctx.out << table;
  if (!result.complete()) {
    for (const auto& col : result.columns) {
      if (col.failures > 0) {
        ctx.err << "n=" << col.n << " " << col.method << "/" << to_string(col.indicator) << ": "
                << col.failures << " failed repetitions" << (col.aborted ? ", aborted" : "")
                << (col.last_error.empty() ? "" : " (" + col.last_error + ")") << "\n";
      }
    }
    return 1;
  }
  return 0;
}

// bench-uci

int cmd_bench_uci(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  UciBenchConfig uc;
  uc.datasets = c.get_strings("dataset");
  if (uc.datasets.empty()) throw InvalidArgument("--dataset is required");
  const auto names = c.get_strings("method");
  if (names.empty()) {
    uc.methods = all_methods();
  } else {
    for (const auto& n : names) uc.methods.push_back(parse_method(n));
  }
  apply_grid(c, uc.grid);
  uc.repetitions = static_cast<int>(c.get_long("repetitions", uc.repetitions));
  uc.csv = csv_options(c);

  const UciBenchResult result =
      run_uci_bench(uc, [&](const std::string& msg) { ctx.err << msg << "\n"; });
  Provenance prov = base_provenance(ctx);
  prov.emplace_back("grid.gammas", join(uc.grid.gammas));
  prov.emplace_back("grid.deltas", join(uc.grid.deltas));
  prov.emplace_back("grid.epsilons", join(uc.grid.epsilons));
  prov.emplace_back("grid.sigmas", join(uc.grid.sigmas));
  prov.emplace_back("weights", uc.grid.fit.weights.describe());
  const std::string header = provenance_header(prov);
  const std::string table = format_uci_table(result);
  write_outputs({{output_path(ctx, "uci_table.txt"), header + table},
                 {output_path(ctx, "uci.csv"), header + uci_csv(result)},
                 {output_path(ctx, "bench-uci.conf"), c.to_text()}});
  ctx.out << table;
  if (!result.complete()) {
    for (const auto& e : result.entries) {
      if (!e.ok) ctx.err << e.dataset << " / " << e.method << ": " << e.error << "\n";
    }
    return 1;
  }
  return 0;
}

int dispatch(Context& ctx) {
  if (ctx.command == "synth") return cmd_synth(ctx);
  if (ctx.command == "fit") return cmd_fit(ctx);
  if (ctx.command == "predict") return cmd_predict(ctx);
  if (ctx.command == "cv") return cmd_cv(ctx);
  if (ctx.command == "bench-bayes") return cmd_bench_bayes(ctx);
  if (ctx.command == "bench-uci") return cmd_bench_uci(ctx);
  throw InvalidArgument("unknown command '" + ctx.command + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distribution-weighted kernel classifiers"};
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, std::string> config_paths;
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    subs[cmd.name] = sub;
    sub->add_option("--config", config_paths[cmd.name], "flat key=value config file");
    for (const auto& o : cmd.options) {
      const std::string flag = std::string("--") + o.name;
      if (o.flag) {
        sub->add_flag(flag, flags[cmd.name][o.name], o.help);
      } else {
        sub->add_option(flag, values[cmd.name][o.name], o.help);
      }
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  std::string name;
  for (const auto& [n, sub] : subs) {
    if (sub->parsed()) name = n;
  }
  const Command& cmd = find_command(name);
  CLI::App* sub = subs[name];
  try {
    RunConfig cfg;
    if (!config_paths[name].empty()) {
      cfg = RunConfig::load(config_paths[name]);
      for (const auto& [k, v] : cfg.values()) {
        const bool known = std::any_of(cmd.options.begin(), cmd.options.end(),
                                       [&](const OptionDef& o) { return k == o.name; });
        if (!known) throw InvalidArgument("config key '" + k + "' is not an option of " + name);
      }
    }
    for (const auto& o : cmd.options) {
      const std::string flag = std::string("--") + o.name;
      if (sub->get_option(flag)->count() == 0) continue;
      cfg.set(o.name, o.flag ? (flags[name][o.name] ? "true" : "false") : values[name][o.name]);
    }
    Context ctx{cfg, out, err, cfg.get("out-dir", "."), name};
    return dispatch(ctx);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace cdfsvm
