#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cdfsvm/cli.hpp"
#include "cdfsvm/datagen.hpp"
#include "cdfsvm/evaluation.hpp"
#include "cdfsvm/io.hpp"
#include "cdfsvm/modelsel.hpp"

#include <sstream>

namespace py = pybind11;
using namespace cdfsvm;

namespace {

GKernelSpec make_g(const std::string& g, double sigma) {
  if (g == "step") return GKernelSpec::step();
  if (g == "gaussian") return GKernelSpec::gaussian(sigma);
  throw InvalidArgument("unknown G kernel '" + g + "' (expected gaussian or step)");
}

KernelSpec::Kind parse_kernel(const std::string& k) {
  if (k == "rbf") return KernelSpec::Kind::rbf;
  if (k == "linear") return KernelSpec::Kind::linear;
  throw InvalidArgument("unknown kernel '" + k + "' (expected rbf or linear)");
}

struct PyModel {
  Model model;
  Scaler scaler;

  Vector scores(const FeatureMatrix& x) const { return predict(model, x); }
  std::vector<int> classes(const FeatureMatrix& x) const { return decide_all(scores(x)); }
};

std::vector<int> labels_of(const Vector& y) { return to_labels(y); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Distribution-weighted support vector classifiers";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init([](const FeatureMatrix& x, const Vector& y, const std::string& name) {
             LabeledSamples s{x, y};
             return make_dataset(s, name);
           }),
           py::arg("x"), py::arg("y"), py::arg("name") = "",
           "Normalizes raw features onto [0,1]; labels in {-1,0,1} map to {0,1}.")
      .def_property_readonly("features", &Dataset::features)
      .def_property_readonly("labels", &Dataset::labels)
      .def_property_readonly("name", &Dataset::name)
      .def_property_readonly("size", &Dataset::size)
      .def_property_readonly("dim", &Dataset::dim)
      .def("transform", [](const Dataset& d, const FeatureMatrix& raw) { return d.scaler().transform(raw); })
      .def("subset", [](const Dataset& d, const std::vector<Index>& rows) { return d.subset(rows); })
      .def("__len__", &Dataset::size);

  py::class_<PyModel>(m, "Model")
      .def_property_readonly("method", [](const PyModel& p) { return to_string(base(p.model).method); })
      .def_property_readonly("coefficients", [](const PyModel& p) { return base(p.model).coefficients; })
      .def_property_readonly("offset", [](const PyModel& p) { return base(p.model).offset; })
      .def_property_readonly("support", [](const PyModel& p) { return base(p.model).support; })
      .def("scores", &PyModel::scores, py::arg("x"), "Scores of already normalized samples.")
      .def("predict", &PyModel::classes, py::arg("x"), "Classes (score > 0.5) of normalized samples.")
      .def("to_json", [](const PyModel& p) { return model_to_json(p.model, p.scaler); })
      .def_static("from_json", [](const std::string& text) {
        StoredModel s = model_from_json(text);
        return PyModel{std::move(s.model), std::move(s.scaler)};
      });

  m.def("methods", [] {
    std::vector<std::string> out;
    for (Method method : all_methods()) out.push_back(to_string(method));
    return out;
  });

  m.def(
      "gram",
      [](const FeatureMatrix& x, const std::string& kernel, double delta) {
        const KernelSpec spec = parse_kernel(kernel) == KernelSpec::Kind::rbf ? KernelSpec::rbf(delta)
                                                                              : KernelSpec::linear();
        return gram(spec, x).values();
      },
      py::arg("x"), py::arg("kernel") = "rbf", py::arg("delta") = 1.0);

  m.def(
      "v_vector",
      [](const FeatureMatrix& x, const std::string& g, double sigma, const std::string& mu,
         std::optional<FeatureMatrix> reference, const std::string& combine, bool normalize) {
        const MeasureSpec spec = build_measure(parse_measure_kind(mu), reference ? *reference : x);
        return v_vector(x, make_g(g, sigma), spec, parse_combine(combine), normalize).values;
      },
      py::arg("x"), py::arg("g") = "gaussian", py::arg("sigma") = 1.0, py::arg("mu") = "empirical",
      py::arg("reference") = py::none(), py::arg("combine") = "product", py::arg("normalize") = true);

  m.def(
      "v_matrix",
      [](const FeatureMatrix& x, const std::string& g, double sigma, const std::string& mu,
         std::optional<FeatureMatrix> reference, const std::string& combine, bool normalize) {
        const MeasureSpec spec = build_measure(parse_measure_kind(mu), reference ? *reference : x);
        return v_matrix(x, make_g(g, sigma), spec, parse_combine(combine), normalize).values;
      },
      py::arg("x"), py::arg("g") = "gaussian", py::arg("sigma") = 1.0, py::arg("mu") = "empirical",
      py::arg("reference") = py::none(), py::arg("combine") = "product", py::arg("normalize") = true);

  m.def(
      "solve_eps_l1",
      [](const Matrix& k, const Vector& y, const Vector& v, double gamma, double epsilon, double tolerance) {
        SolverConfig cfg;
        cfg.gamma = gamma;
        cfg.epsilon = epsilon;
        cfg.tolerance = tolerance;
        const DualSolution s = solve_eps_l1(k, y, v, cfg);
        py::dict out;
        out["coefficients"] = s.coefficients;
        out["bias"] = s.bias;
        out["converged"] = s.converged;
        out["iterations"] = s.iterations;
        out["objective"] = s.objective;
        out["violation"] = s.violation;
        return out;
      },
      py::arg("k"), py::arg("y"), py::arg("v"), py::arg("gamma") = 1.0, py::arg("epsilon") = 0.0,
      py::arg("tolerance") = 1e-3);

  m.def(
      "fit",
      [](const Dataset& data, const std::string& method, double gamma, double delta, double epsilon,
         const std::string& g, double sigma, const std::string& kernel, const std::string& mu,
         const std::string& combine, double tolerance, std::optional<FeatureMatrix> reference) {
        const Method mt = parse_method(method);
        GridCell cell;
        cell.gamma = gamma;
        cell.delta = delta;
        cell.epsilon = epsilon;
        if (uses_weights(mt)) cell.g = make_g(g, sigma);
        FitOptions opt;
        opt.kernel = parse_kernel(kernel);
        opt.weights.mu = parse_measure_kind(mu);
        opt.weights.combine = parse_combine(combine);
        opt.tolerance = tolerance;
        return PyModel{fit_model(data, mt, cell, opt, reference ? &*reference : nullptr), data.scaler()};
      },
      py::arg("data"), py::arg("method") = "eps-l1vsvm", py::arg("gamma") = 1.0, py::arg("delta") = 1.0,
      py::arg("epsilon") = 0.125, py::arg("g") = "gaussian", py::arg("sigma") = 1.0, py::arg("kernel") = "rbf",
      py::arg("mu") = "empirical", py::arg("combine") = "product", py::arg("tolerance") = 1e-3,
      py::arg("reference") = py::none());

  m.def(
      "grid_search",
      [](const Dataset& data, const std::string& method, std::vector<double> gammas, std::vector<double> deltas,
         std::vector<double> epsilons, std::vector<double> sigmas, bool include_step, const std::string& kernel,
         const std::string& mu, int folds, const std::string& indicator, std::uint64_t seed) {
        GridSpec grid;
        grid.gammas = std::move(gammas);
        grid.deltas = std::move(deltas);
        grid.epsilons = std::move(epsilons);
        grid.sigmas = std::move(sigmas);
        grid.include_step = include_step;
        grid.fit.kernel = parse_kernel(kernel);
        grid.fit.weights.mu = parse_measure_kind(mu);
        grid.folds = folds;
        grid.indicator = parse_indicator(indicator);
        grid.seed = seed;
        const GridResult r = grid_search(data, parse_method(method), grid);
        py::list cells;
        for (const CellScore& c : r.cells) {
          py::dict d;
          d["cell"] = c.cell.describe();
          d["gamma"] = c.cell.gamma;
          d["delta"] = c.cell.delta;
          d["epsilon"] = c.cell.epsilon;
          d["g"] = c.cell.g ? c.cell.g->describe() : std::string();
          d["acc"] = c.acc;
          d["vac"] = c.vac;
          d["gmean"] = c.gmean;
          d["valid"] = c.valid;
          cells.append(d);
        }
        py::dict out;
        out["cells"] = cells;
        out["best"] = r.best_index(grid.indicator);
        return out;
      },
      py::arg("data"), py::arg("method"), py::arg("gammas") = powers_of_two(-4, 4),
      py::arg("deltas") = std::vector<double>{1.0}, py::arg("epsilons") = powers_of_two(-4, -2),
      py::arg("sigmas") = powers_of_two(-4, 4), py::arg("include_step") = true, py::arg("kernel") = "rbf",
      py::arg("mu") = "empirical", py::arg("folds") = 10, py::arg("indicator") = "acc", py::arg("seed") = 0);

  m.def(
      "gaussian_2d",
      [](Index n, std::uint64_t seed) {
        GaussianSpec2D spec;
        spec.n = n;
        spec.seed = seed;
        return gen_gaussian_2d(spec);
      },
      py::arg("n") = 200, py::arg("seed") = 1);
  m.def(
      "robustness_1d",
      [](Index n, std::uint64_t seed) {
        Robustness1DSpec spec;
        spec.n = n;
        spec.seed = seed;
        return gen_robustness_1d(spec);
      },
      py::arg("n") = 200, py::arg("seed") = 1);
  m.def("monk3_full", [] { return make_dataset(monk3_full(), "monkst"); });
  m.def(
      "monk3_sample",
      [](Index n, double noise, std::uint64_t seed) { return make_dataset(monk3_sample(n, noise, seed), "monks3"); },
      py::arg("n") = 122, py::arg("noise") = 0.05, py::arg("seed") = 1);

  m.def("accuracy", [](const Vector& y, const Vector& p) { return accuracy(labels_of(y), labels_of(p)); });
  m.def("gmean", [](const Vector& y, const Vector& p) { return gmean(labels_of(y), labels_of(p)); });
  m.def("vac", [](const Vector& y, const Vector& p, const std::vector<double>& v) {
    return vac(labels_of(y), labels_of(p), v);
  });
  m.def(
      "dist_to_bayes",
      [](const std::vector<double>& ks, const std::vector<double>& qs, double k0, double q0) {
        return dist_to_bayes(ks, qs, k0, q0);
      },
      py::arg("ks"), py::arg("qs"), py::arg("k0") = 2.0, py::arg("q0") = 0.0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one subcommand; returns (exit code, stdout, stderr).");
}
