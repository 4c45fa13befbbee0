#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pkirch/acceptance.hpp"
#include "pkirch/experiment.hpp"

namespace {

int finish(const pkirch::RunResult& result) {
  for (const auto& [k, v] : result.headline) {
    std::cout << k << ": " << v << "\n";
  }
  return result.status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlocal p-Kirchhoff Neumann solver and regularity verification"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;

  CLI::App* run = app.add_subcommand("run", "execute one experiment config");
  run->add_option("config", config_path, "JSON experiment config")->required();
  run->add_option("--out", out_dir, "output directory (overrides the config)");

  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep config");
  sweep->add_option("config", config_path, "JSON sweep config")->required();
  sweep->add_option("--out", out_dir, "output directory (overrides the config)");

  int only = -1;
  std::string verify_out = "verify_out";
  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--only", only, "run a single criterion (1..10)");
  verify->add_option("--out", verify_out, "scratch directory");

  double p = 3.0, alpha = 8.0, R = 5.0, s = 50.0;
  int dim = 4;
  CLI::App* exps = app.add_subcommand("exponents", "print the exponent table");
  exps->add_option("--p", p, "degeneracy exponent (> 2)");
  exps->add_option("--N", dim, "space dimension");
  exps->add_option("--alpha", alpha, "growth exponent");
  exps->add_option("--R", R, "auxiliary exponent");
  exps->add_option("--s", s, "target Lebesgue exponent");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return finish(pkirch::run_experiment_file(config_path, out_dir));
    }
    if (sweep->parsed()) {
      return finish(pkirch::run_sweep_file(config_path, out_dir));
    }
    if (verify->parsed()) {
      std::filesystem::create_directories(verify_out);
      const int failures = pkirch::run_acceptance(std::cout, verify_out, only);
      return failures == 0 ? 0 : 1;
    }
    if (exps->parsed()) {
      pkirch::print_exponent_table(std::cout, p, dim, alpha, R, s);
      return 0;
    }
  } catch (const pkirch::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
