#ifndef PKIRCH_EXPERIMENT_HPP
#define PKIRCH_EXPERIMENT_HPP

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pkirch {

inline constexpr const char* kVersion = "pkirch 0.1.0";

/// exit_status 2: the config file does not parse; 3: it parses but is invalid.
struct ConfigError : std::runtime_error {
  int exit_status;
  ConfigError(int status, const std::string& msg)
      : std::runtime_error(msg), exit_status(status) {}
};

struct RunResult {
  int status = 0;  // 0 ok, 1 completed with failed checks / nonconvergence
  std::vector<std::pair<std::string, std::string>> headline;
};

/// Executes the experiment described by a JSON config file; writes report.csv,
/// any per-field CSVs, and summary.txt into the output directory.  The output
/// directory comes from (in order) out_override, the config's output_dir, and
/// the PKIRCH_OUT_ROOT environment variable as root for relative paths.
RunResult run_experiment_file(const std::filesystem::path& config_path,
                              const std::filesystem::path& out_override = {});

/// JSON config text instead of a file (used by sweeps and tests).
RunResult run_experiment_json(const std::string& config_text,
                              const std::filesystem::path& out_dir);

/// Cartesian parameter sweep over a base config; one aggregate.csv row per
/// cell, per-cell outputs under cell subdirectories.  Cell failures are
/// recorded and the sweep continues.
RunResult run_sweep_file(const std::filesystem::path& config_path,
                         const std::filesystem::path& out_override = {});

/// Exponent table printed by the CLI subcommand (and written by the
/// exponent-table experiment).
void print_exponent_table(std::ostream& os, double p, int dim, double alpha, double R,
                          double s);

}  // namespace pkirch

#endif  // PKIRCH_EXPERIMENT_HPP
