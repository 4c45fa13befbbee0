#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pkirch/experiment.hpp"

using namespace pkirch;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "pkirch_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path path = dir / "config.json";
  std::ofstream out(path);
  out << text;
  return path;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("exponent table experiment") {
  const fs::path dir = scratch_dir("exponent_table");
  const std::string cfg = R"({
    "experiment": "exponent-table",
    "p": 3.0, "dim": 4, "alpha": 8.0, "R": 5.0, "s": 50.0,
    "output_dir": ")" + (dir / "out").string() + R"("
  })";
  const RunResult res = run_experiment_file(write_config(dir, cfg));
  CHECK(res.status == 0);
  const std::string report = slurp(dir / "out" / "report.csv");
  CHECK(report.find("n_s,1") != std::string::npos);
  CHECK(report.find("h_exponent,8") != std::string::npos);
  CHECK(report.find("k1,5") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "summary.txt"));
}

TEST_CASE("config errors carry the documented exit statuses") {
  const fs::path dir = scratch_dir("config_errors");
  // parse error -> 2
  const fs::path bad = write_config(dir, "{ not json");
  try {
    run_experiment_file(bad);
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(e.exit_status == 2);
  }
  // validation error (negative tolerance) -> 3
  const std::string cfg = R"({
    "experiment": "solve",
    "output_dir": ")" + (dir / "out").string() + R"(",
    "grid": {"kind": "rectangle", "resolution": 16},
    "problem": {"p": 3.0, "tol_outer": -1.0}
  })";
  try {
    run_experiment_file(write_config(dir, cfg));
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(e.exit_status == 3);
  }
  // unknown experiment -> 3
  try {
    run_experiment_json(R"({"experiment": "nope"})", dir / "out2");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(e.exit_status == 3);
  }
}

TEST_CASE("small manufactured convergence run") {
  const fs::path dir = scratch_dir("manufactured");
  const std::string cfg = R"({
    "experiment": "manufactured-convergence",
    "alpha": 1.25, "p": 3.0, "dim": 2,
    "nodes": [256, 512],
    "max_rel_error": 0.1
  })";
  const RunResult res = run_experiment_json(cfg, dir / "out");
  CHECK(res.status == 0);
  CHECK(fs::exists(dir / "out" / "report.csv"));
}

TEST_CASE("nq certificate experiment reports precondition violations") {
  const fs::path dir = scratch_dir("nq");
  const std::string good = R"({
    "experiment": "nq-certificate",
    "grid": {"kind": "rectangle", "resolution": 24},
    "problem": {"p": 3.0, "nonlinearity": {"id": "example1", "beta": 3.0, "c": 1.0,
      "nu": 1.2, "g": {"kind": "affine", "c0": 1.0, "cx": 0.2}}}
  })";
  CHECK(run_experiment_json(good, dir / "good").status == 0);
  const std::string bad = R"({
    "experiment": "nq-certificate",
    "grid": {"kind": "rectangle", "resolution": 24},
    "problem": {"p": 3.0, "nonlinearity": {"id": "example1", "beta": 3.0, "c": 1.0,
      "nu": 1.5, "g": {"kind": "affine", "c0": 1.0, "cx": 0.2}}}
  })";
  const RunResult res = run_experiment_json(bad, dir / "bad");
  CHECK(res.status == 1);
  CHECK(slurp(dir / "bad" / "report.csv").find("precondition-violated") != std::string::npos);
}

TEST_CASE("solve experiment is deterministic") {
  const fs::path dir = scratch_dir("determinism");
  const std::string cfg = R"({
    "experiment": "solve",
    "seed": 3,
    "grid": {"kind": "rectangle", "resolution": 32},
    "problem": {
      "p": 3.0,
      "kirchhoff": {"id": "example1-log"},
      "nonlinearity": {"id": "example1", "beta": 3.0, "c": 1.0, "nu": 1.2,
                       "g": {"kind": "bumps", "count": 4, "offset": 1.5}},
      "homotopy": [0.0, 0.5, 1.0],
      "tol_outer": 1e-6, "tol_res": 1e-4, "tol_inner": 1e-7
    }
  })";
  const RunResult r1 = run_experiment_json(cfg, dir / "a");
  const RunResult r2 = run_experiment_json(cfg, dir / "b");
  CHECK(r1.status == 0);
  CHECK(r2.status == 0);
  CHECK(slurp(dir / "a" / "report.csv") == slurp(dir / "b" / "report.csv"));
  CHECK(slurp(dir / "a" / "field.csv") == slurp(dir / "b" / "field.csv"));
  CHECK(!slurp(dir / "a" / "report.csv").empty());
}

TEST_CASE("sweep runs cells and aggregates") {
  const fs::path dir = scratch_dir("sweep");
  const std::string cfg = R"({
    "experiment": "sweep",
    "output_dir": ")" + (dir / "out").string() + R"(",
    "base": {
      "experiment": "exponent-table",
      "p": 3.0, "dim": 4, "alpha": 8.0, "R": 5.0, "s": 50.0
    },
    "parameters": [{"path": "s", "values": [24.0, 50.0, 100.0]}]
  })";
  const RunResult res = run_sweep_file(write_config(dir, cfg));
  CHECK(res.status == 0);
  const std::string agg = slurp(dir / "out" / "aggregate.csv");
  CHECK(!agg.empty());
  int rows = 0;
  for (char ch : agg) rows += ch == '\n';
  CHECK(rows == 4);  // header + 3 cells
  CHECK(fs::exists(dir / "out" / "cell_2" / "report.csv"));
}

TEST_CASE("empty sweep parameter list is a validation error") {
  const fs::path dir = scratch_dir("sweep_empty");
  const std::string cfg = R"({
    "experiment": "sweep",
    "base": {"experiment": "exponent-table"},
    "parameters": []
  })";
  try {
    run_sweep_file(write_config(dir, cfg));
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(e.exit_status == 3);
  }
}
