#include "doctest.h"

#include "cdfsvm/cli.hpp"
#include "cdfsvm/io.hpp"
#include "json.hpp"

#include <filesystem>
#include <sstream>

using namespace cdfsvm;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cdfsvm_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config text") {
  const RunConfig c = RunConfig::parse("# comment\nmethod = lssvm\n\n--seed=4\ngammas=1, 2 ,4\n");
  CHECK(c.get("method") == "lssvm");
  CHECK(c.get_seed("seed", 0) == 4);
  CHECK(c.get_doubles("gammas", {}) == std::vector<double>{1, 2, 4});
  CHECK(c.to_text() == "gammas=1, 2 ,4\nmethod=lssvm\nseed=4\n");
  CHECK_THROWS_AS(RunConfig::parse("a=1\nbroken\n"), ParseError);
  const RunConfig bad = RunConfig::parse("n=abc\nflag=maybe\n");
  CHECK_THROWS_AS(bad.get_long("n", 0), InvalidArgument);
  CHECK_THROWS_AS(bad.get_bool("flag", false), InvalidArgument);
}

TEST_CASE("synth prints the Bayes line and is byte-reproducible") {
  const fs::path dir = scratch("synth");
  const Run a = run({"synth", "--n", "100", "--seed", "7", "--out", (dir / "a.csv").string()});
  const Run b = run({"synth", "--n", "100", "--seed", "7", "--out", (dir / "b.csv").string()});
  CHECK(a.code == 0);
  CHECK(a.out.find("x2 = 2*x1 + 0") != std::string::npos);
  CHECK(read_file((dir / "a.csv").string()) == read_file((dir / "b.csv").string()));
  fs::remove_all(dir);
}

TEST_CASE("fit on separable data, unit weights and reruns") {
  const fs::path dir = scratch("fit");
  const std::string data = (dir / "d.csv").string();
  write_file_atomic(data, "x,y\n0,0\n0.1,0\n0.2,0\n0.3,0\n0.35,0\n0.65,1\n0.7,1\n0.8,1\n0.9,1\n1,1\n");
  const Run lin = run({"fit", "--dataset", data, "--method", "lssvm", "--kernel", "linear", "--gamma", "16",
                       "--test-fraction", "0.4", "--out-dir", (dir / "a").string()});
  REQUIRE(lin.code == 0);
  const auto report = nlohmann::json::parse(read_file((dir / "a" / "report.json").string()));
  CHECK(report["acc"].get<double>() == 1.0);

  const Run again = run({"fit", "--dataset", data, "--method", "lssvm", "--kernel", "linear", "--gamma", "16",
                         "--test-fraction", "0.4", "--out-dir", (dir / "b").string()});
  CHECK(read_file((dir / "a" / "report.json").string()) == read_file((dir / "b" / "report.json").string()));

  run({"fit", "--dataset", data, "--method", "eps-l1vsvm", "--v-ones", "--out-dir", (dir / "c").string()});
  run({"fit", "--dataset", data, "--method", "eps-l1svm", "--out-dir", (dir / "d").string()});
  const auto mc = nlohmann::json::parse(read_file((dir / "c" / "model.json").string()));
  const auto md = nlohmann::json::parse(read_file((dir / "d" / "model.json").string()));
  CHECK(mc["coefficients"].dump() == md["coefficients"].dump());

  const Run pred = run({"predict", "--model", (dir / "a" / "model.json").string(), "--dataset", data,
                        "--out-dir", (dir / "p").string()});
  CHECK(pred.code == 0);
  CHECK(pred.out.find("acc=1") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("flags override the config file") {
  const fs::path dir = scratch("conf");
  const std::string data = (dir / "d.csv").string();
  run({"synth", "--n", "60", "--seed", "2", "--out", data});
  write_file_atomic((dir / "run.conf").string(), "method=lssvm\ngammas=1\ndeltas=1\nfolds=3\nseed=5\n");
  const Run r = run({"cv", "--config", (dir / "run.conf").string(), "--dataset", data, "--gammas", "2",
                     "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("gamma=2 ") != std::string::npos);
  const std::string echoed = read_file((dir / "cv.conf").string());
  CHECK(echoed.find("gammas=2\n") != std::string::npos);
  CHECK(read_file((dir / "cv_scores.csv").string()).rfind("# command: cv\n", 0) == 0);

  write_file_atomic((dir / "bad.conf").string(), "colour=blue\n");
  CHECK(run({"cv", "--config", (dir / "bad.conf").string(), "--dataset", data}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("errors give nonzero exit codes") {
  CHECK(run({}).code != 0);
  CHECK(run({"fit", "--dataset", "/nonexistent/x.csv"}).code != 0);
  CHECK(run({"cv", "--dataset", "x.csv", "--indicator", "auc"}).code != 0);
  CHECK(run({"synth", "--generator", "nope"}).code == 2);
  CHECK(run({"bench-bayes", "--kernel", "rbf"}).code == 2);
}

TEST_CASE("bench-bayes with the analytic rule only") {
  const fs::path dir = scratch("bayes");
  const Run r = run({"bench-bayes", "--method", "bayes", "--n", "50", "--repetitions", "2", "--out-dir", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("0.0000") != std::string::npos);
  CHECK(fs::exists(dir / "bayes_runs.csv"));
  fs::remove_all(dir);
}
