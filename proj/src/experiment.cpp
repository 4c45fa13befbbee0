#include "pkirch/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "pkirch/exponents.hpp"
#include "pkirch/field_io.hpp"
#include "pkirch/fracnorm.hpp"
#include "pkirch/grid.hpp"
#include "pkirch/kirchhoff.hpp"
#include "pkirch/oracle.hpp"
#include "pkirch/plap_solver.hpp"
#include "pkirch/random_fields.hpp"

namespace pkirch {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void invalid(const std::string& msg) { throw ConfigError(3, msg); }

double jnum(const json& j, const std::string& key, double fallback,
            bool required = false) {
  if (!j.contains(key)) {
    if (required) invalid("missing numeric field '" + key + "'");
    return fallback;
  }
  if (!j.at(key).is_number()) invalid("field '" + key + "' must be a number");
  return j.at(key).get<double>();
}

int jint(const json& j, const std::string& key, int fallback, bool required = false) {
  if (!j.contains(key)) {
    if (required) invalid("missing integer field '" + key + "'");
    return fallback;
  }
  if (!j.at(key).is_number_integer()) invalid("field '" + key + "' must be an integer");
  return j.at(key).get<int>();
}

std::string jstr(const json& j, const std::string& key, const std::string& fallback,
                 bool required = false) {
  if (!j.contains(key)) {
    if (required) invalid("missing string field '" + key + "'");
    return fallback;
  }
  if (!j.at(key).is_string()) invalid("field '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

GridPtr parse_grid(const json& j) {
  if (!j.is_object()) invalid("'grid' must be an object");
  GridSpec spec;
  const std::string kind = jstr(j, "kind", "rectangle");
  if (kind == "rectangle") {
    spec.kind = GridKind::rectangle;
    spec.dim = jint(j, "dim", 2);
  } else if (kind == "radial-ball") {
    spec.kind = GridKind::radial_ball;
    spec.dim = jint(j, "dim", 2);
    spec.r_min = jnum(j, "r_min", 1e-4);
    spec.grading = jnum(j, "grading", 1.05);
  } else {
    invalid("unknown grid kind '" + kind + "'");
  }
  if (j.contains("resolution")) {
    const auto& r = j.at("resolution");
    if (r.is_number_integer()) {
      spec.resolution = {r.get<int>(), r.get<int>()};
    } else if (r.is_array() && !r.empty()) {
      spec.resolution[0] = r[0].get<int>();
      spec.resolution[1] = r.size() > 1 ? r[1].get<int>() : r[0].get<int>();
    } else {
      invalid("'resolution' must be an integer or an array");
    }
  }
  if (j.contains("length")) {
    const auto& l = j.at("length");
    if (l.is_array() && !l.empty()) {
      spec.length[0] = l[0].get<double>();
      spec.length[1] = l.size() > 1 ? l[1].get<double>() : l[0].get<double>();
    } else if (l.is_number()) {
      spec.length = {l.get<double>(), l.get<double>()};
    }
  }
  try {
    return Grid::make(spec);
  } catch (const std::exception& e) {
    invalid(std::string("grid: ") + e.what());
  }
}

ScalarField parse_g(const json& j, const GridPtr& grid, std::uint64_t seed) {
  if (!j.is_object()) invalid("'g' must be an object");
  const std::string kind = jstr(j, "kind", "", true);
  if (kind == "constant") {
    return constant_field(grid, jnum(j, "value", 1.0));
  }
  if (kind == "affine") {
    const double c0 = jnum(j, "c0", 0.0);
    const double cx = jnum(j, "cx", 0.0);
    const double cy = jnum(j, "cy", 0.0);
    return field_from(grid, [&](double x, double y) { return c0 + cx * x + cy * y; });
  }
  if (kind == "bumps") {
    BumpSpec spec;
    spec.count = jint(j, "count", 6);
    spec.amplitude = jnum(j, "amplitude", 1.0);
    spec.offset = jnum(j, "offset", 0.0);
    spec.width_lo = jnum(j, "width_lo", 0.08);
    spec.width_hi = jnum(j, "width_hi", 0.25);
    const std::uint64_t s = seed + static_cast<std::uint64_t>(jint(j, "seed_offset", 0));
    return random_bumps(grid, s, spec);
  }
  invalid("unknown g kind '" + kind + "'");
}

KirchhoffTerm parse_kirchhoff(const json& j) {
  if (!j.is_object()) invalid("'kirchhoff' must be an object");
  const std::string id = jstr(j, "id", "", true);
  if (id == "constant") {
    return KirchhoffTerm::constant(jnum(j, "value", 1.0));
  }
  if (id == "example1-log") {
    return KirchhoffTerm::example1_log(jnum(j, "theta1", 1.0), jnum(j, "theta2", 1.0));
  }
  if (id == "example2-oscillating") {
    return KirchhoffTerm::example2_oscillating(jnum(j, "delta1", 1.0),
                                               jnum(j, "delta2", 1.0));
  }
  if (id == "tabulated") {
    if (!j.contains("samples") || !j.at("samples").is_array()) {
      invalid("tabulated kirchhoff term needs a 'samples' array");
    }
    std::vector<std::pair<double, double>> samples;
    for (const auto& row : j.at("samples")) {
      samples.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
    }
    return KirchhoffTerm::tabulated(std::move(samples));
  }
  invalid("unknown kirchhoff id '" + id + "'");
}

Nonlinearity parse_nonlinearity(const json& j, const GridPtr& grid, double p,
                                std::uint64_t seed) {
  if (!j.is_object()) invalid("'nonlinearity' must be an object");
  const std::string id = jstr(j, "id", "", true);
  ScalarField g = parse_g(j.contains("g") ? j.at("g") : json::object({{"kind", "constant"}}),
                          grid, seed);
  try {
    if (id == "source") {
      return nonlinearity_source(std::move(g));
    }
    if (id == "example1") {
      const double beta = jnum(j, "beta", 3.0);
      if (beta > p) invalid("example1 requires beta <= p");
      return nonlinearity_example1(beta, jnum(j, "c", 1.0), std::move(g),
                                   jnum(j, "nu", 1.0));
    }
    if (id == "example2") {
      return nonlinearity_example2(p, jnum(j, "eps_exp", 0.5), std::move(g),
                                   jnum(j, "theta", 0.5));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    invalid(std::string("nonlinearity: ") + e.what());
  }
  invalid("unknown nonlinearity id '" + id + "'");
}

struct ProblemBundle {
  NonlocalProblem prob;
  FixedPointOptions opts;
};

ProblemBundle parse_problem(const json& j, const GridPtr& grid, std::uint64_t seed) {
  if (!j.is_object()) invalid("'problem' must be an object");
  ProblemBundle pb;
  pb.prob.p = jnum(j, "p", 3.0);
  if (!(pb.prob.p > 2.0)) invalid("problem: p must be > 2");
  pb.prob.eps = jnum(j, "eps", -1.0);
  pb.prob.a = parse_kirchhoff(j.contains("kirchhoff")
                                  ? j.at("kirchhoff")
                                  : json::object({{"id", "constant"}, {"value", 1.0}}));
  pb.prob.f = parse_nonlinearity(
      j.contains("nonlinearity") ? j.at("nonlinearity") : json::object({{"id", "source"}}),
      grid, pb.prob.p, seed);
  if (j.contains("homotopy")) {
    if (!j.at("homotopy").is_array() || j.at("homotopy").empty()) {
      invalid("'homotopy' must be a nonempty array");
    }
    pb.opts.schedule.clear();
    for (const auto& t : j.at("homotopy")) {
      pb.opts.schedule.push_back(t.get<double>());
    }
  }
  pb.opts.damping = jnum(j, "damping", 0.5);
  pb.opts.tol_outer = jnum(j, "tol_outer", 1e-6);
  pb.opts.tol_res = jnum(j, "tol_res", 1e-4);
  pb.opts.tol_inner = jnum(j, "tol_inner", 1e-7);
  pb.opts.max_outer = jint(j, "max_outer", 100);
  if (!(pb.opts.tol_outer > 0.0) || !(pb.opts.tol_res > 0.0) || !(pb.opts.tol_inner > 0.0)) {
    invalid("problem: tolerances must be positive");
  }
  return pb;
}

struct CsvWriter {
  std::ofstream out;
  explicit CsvWriter(const fs::path& path) : out(path) {
    if (!out) throw std::runtime_error("cannot open " + path.string());
  }
  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      out << cells[i] << (i + 1 < cells.size() ? "," : "\n");
    }
  }
};

std::string fstr(double x) { return format_float(x); }

void write_summary(const fs::path& dir, const json& config, const RunResult& result) {
  std::ofstream out(dir / "summary.txt");
  out << kVersion << "\n";
  out << "status: " << result.status << "\n";
  out << "config:\n" << config.dump(2) << "\n";
  out << "headline:\n";
  for (const auto& [k, v] : result.headline) {
    out << "  " << k << ": " << v << "\n";
  }
}

// ---- experiment kinds -----------------------------------------------------

RunResult run_solve(const json& cfg, const fs::path& dir) {
  const std::uint64_t seed = static_cast<std::uint64_t>(jint(cfg, "seed", 0));
  const GridPtr grid = parse_grid(cfg.contains("grid") ? cfg.at("grid") : json::object());
  ProblemBundle pb = parse_problem(
      cfg.contains("problem") ? cfg.at("problem") : json::object(), grid, seed);

  const FixedPointReport rep = fixed_point_solve(pb.prob, pb.opts);

  CsvWriter csv(dir / "report.csv");
  csv.row({"outer_iter", "t", "theta", "b", "succ_diff_w1p"});
  for (size_t i = 0; i < rep.succ_diff.size(); ++i) {
    csv.row({std::to_string(i), fstr(rep.t_history[i]), fstr(rep.theta_history[i]),
             fstr(rep.b_history[i]), fstr(rep.succ_diff[i])});
  }
  write_field_csv(dir / "field.csv", rep.u);

  RunResult res;
  res.status = rep.converged ? 0 : 1;
  res.headline = {{"converged", rep.converged ? "1" : "0"},
                  {"diverged", rep.diverged ? "1" : "0"},
                  {"outer_iterations", std::to_string(rep.outer_iterations)},
                  {"residual_l2", fstr(rep.residual)},
                  {"u_min", fstr(rep.u.min())},
                  {"u_max", fstr(rep.u.max())},
                  {"b_final", fstr(rep.b_history.empty() ? 0.0 : rep.b_history.back())}};
  return res;
}

RunResult run_manufactured(const json& cfg, const fs::path& dir) {
  const double alpha = jnum(cfg, "alpha", 1.25);
  const double p = jnum(cfg, "p", 3.0);
  const int dim = jint(cfg, "dim", 2);
  const double max_rel = jnum(cfg, "max_rel_error", 0.02);
  std::vector<int> nodes{512, 1024, 2048};
  if (cfg.contains("nodes")) {
    nodes.clear();
    for (const auto& n : cfg.at("nodes")) nodes.push_back(n.get<int>());
  }
  if (nodes.empty()) invalid("manufactured-convergence: empty node list");
  const RadialProfile prof = RadialProfile::make(alpha, dim, p);

  CsvWriter csv(dir / "report.csv");
  csv.row({"nodes", "rel_w1p_error", "residual_l2", "iterations"});
  std::vector<double> errors;
  for (int n : nodes) {
    GridSpec gs;
    gs.kind = GridKind::radial_ball;
    gs.dim = dim;
    gs.resolution = {n, n};
    gs.r_min = jnum(cfg, "r_min", 1e-4);
    gs.grading = jnum(cfg, "grading", 1.05);
    const GridPtr grid = Grid::make(gs);
    LocalProblem lp;
    lp.p = p;
    lp.k = 1.0;
    lp.g = manufactured_rhs(prof, grid);
    lp.eps = jnum(cfg, "eps", -1.0);
    lp.tol = jnum(cfg, "tol", 1e-9);
    lp.max_iter = 400;
    const SolveReport rep = solve_scaled(lp);
    const ScalarField exact = profile_field(prof, grid);
    ScalarField diff(grid);
    for (int i = 0; i < diff.size(); ++i) diff[i] = rep.u[i] - exact[i];
    const double rel = sobolev_norm(diff, p) / sobolev_norm(exact, p);
    errors.push_back(rel);
    csv.row({std::to_string(n), fstr(rel), fstr(rep.residual_history.back()),
             std::to_string(rep.iterations)});
  }
  bool monotone = true;
  for (size_t i = 1; i < errors.size(); ++i) {
    monotone = monotone && errors[i] < errors[i - 1];
  }
  const bool small = errors.back() <= max_rel;
  RunResult res;
  res.status = (monotone && small) ? 0 : 1;
  res.headline = {{"monotone", monotone ? "1" : "0"},
                  {"final_rel_error", fstr(errors.back())},
                  {"max_rel_error", fstr(max_rel)}};
  return res;
}

RunResult run_verify_regularity(const json& cfg, const fs::path& dir) {
  const double alpha = jnum(cfg, "alpha", 1.25);
  const double p = jnum(cfg, "p", 3.0);
  const int dim = jint(cfg, "dim", 2);
  const double r = jnum(cfg, "r", r_exponent(p, 2.0));
  const double sigma = 1.0 + 2.0 / r;
  std::vector<int> resolutions{256, 512, 1024};
  if (cfg.contains("resolutions")) {
    resolutions.clear();
    for (const auto& n : cfg.at("resolutions")) resolutions.push_back(n.get<int>());
  }
  const double stability_tol = jnum(cfg, "stability_tol", 0.10);
  const double rate_tol = jnum(cfg, "rate_tol", 0.15);
  const RadialProfile prof = RadialProfile::make(alpha, dim, p);

  CsvWriter csv(dir / "report.csv");
  csv.row({"quantity", "value"});

  std::vector<double> seminorms;
  for (int n : resolutions) {
    GridSpec gs;
    gs.kind = GridKind::radial_ball;
    gs.dim = dim;
    gs.resolution = {n, n};
    gs.r_min = jnum(cfg, "r_min", 1e-4);
    gs.grading = jnum(cfg, "grading", 1.05);
    const GridPtr grid = Grid::make(gs);
    const ScalarField u = profile_field(prof, grid);
    const NikolskiiEstimate est = nikolskii_seminorm(u, sigma, r);
    seminorms.push_back(est.seminorm);
    csv.row({"seminorm_n" + std::to_string(n), fstr(est.seminorm)});
  }
  double stability = 0.0;
  for (double s : seminorms) {
    stability = std::max(stability, std::abs(s - seminorms.back()) / seminorms.back());
  }

  std::vector<double> cutoffs;
  if (cfg.contains("cutoffs")) {
    for (const auto& e : cfg.at("cutoffs")) cutoffs.push_back(e.get<double>());
  } else {
    for (int i = 0; i < 8; ++i) {
      cutoffs.push_back(3e-3 * std::pow(1e-4 / 3e-3, static_cast<double>(i) / 7.0));
    }
    std::sort(cutoffs.rbegin(), cutoffs.rend());
  }
  const CutoffRate rate = cutoff_divergence_rate(prof, r, cutoffs);
  const double analytic = (alpha - 2.0) * r + dim;
  const double rate_err = std::abs(rate.exponent - analytic) / std::abs(analytic);

  csv.row({"seminorm_stability", fstr(stability)});
  csv.row({"cutoff_exponent", fstr(rate.exponent)});
  csv.row({"cutoff_exponent_analytic", fstr(analytic)});
  csv.row({"cutoff_log_case", rate.log_case ? "1" : "0"});

  RunResult res;
  const bool ok = stability <= stability_tol && rate_err <= rate_tol;
  res.status = ok ? 0 : 1;
  res.headline = {{"seminorm_stability", fstr(stability)},
                  {"cutoff_exponent", fstr(rate.exponent)},
                  {"analytic_exponent", fstr(analytic)}};
  return res;
}

RunResult run_nq(const json& cfg, const fs::path& dir) {
  const std::uint64_t seed = static_cast<std::uint64_t>(jint(cfg, "seed", 0));
  const GridPtr grid = parse_grid(cfg.contains("grid") ? cfg.at("grid") : json::object());
  ProblemBundle pb = parse_problem(
      cfg.contains("problem") ? cfg.at("problem") : json::object(), grid, seed);
  NqSearch search;
  if (cfg.contains("search")) {
    const json& s = cfg.at("search");
    search.t_max = jnum(s, "t_max", search.t_max);
    search.t_samples = jint(s, "t_samples", search.t_samples);
    search.x_samples = jint(s, "x_samples", search.x_samples);
    search.r_start = jnum(s, "r_start", search.r_start);
  }
  const NqCertificate cert = nq_certificate(pb.prob.f, search);

  CsvWriter csv(dir / "report.csv");
  csv.row({"status", "R", "empirical_c2", "margin", "K", "eps", "delta"});
  const std::string status_name = cert.status == NqStatus::ok ? "ok"
                                  : cert.status == NqStatus::precondition_violated
                                      ? "precondition-violated"
                                      : "not-found";
  csv.row({status_name, fstr(cert.R), fstr(cert.empirical_c2), fstr(cert.margin),
           fstr(cert.K), fstr(cert.eps), fstr(cert.delta)});

  RunResult res;
  res.status = cert.status == NqStatus::ok ? 0 : 1;
  res.headline = {{"status", status_name},
                  {"R", fstr(cert.R)},
                  {"empirical_c2", fstr(cert.empirical_c2)},
                  {"margin", fstr(cert.margin)},
                  {"K", fstr(cert.K)},
                  {"note", cert.note.empty() ? "-" : cert.note}};
  return res;
}

RunResult run_bound_sweep(const json& cfg, const fs::path& dir) {
  const std::uint64_t seed = static_cast<std::uint64_t>(jint(cfg, "seed", 0));
  const int count = jint(cfg, "count", 10);
  if (count < 1) invalid("bound-sweep: count must be >= 1");
  const double s = jnum(cfg, "s", 3.0);
  const double max_spread = jnum(cfg, "max_spread", 3.0);
  const GridPtr grid = parse_grid(cfg.contains("grid") ? cfg.at("grid") : json::object());
  const json problem = cfg.contains("problem") ? cfg.at("problem") : json::object();
  const double p = jnum(problem, "p", 3.0);
  const KirchhoffTerm a = parse_kirchhoff(
      problem.contains("kirchhoff") ? problem.at("kirchhoff")
                                    : json::object({{"id", "example1-log"}}));
  const json gspec = cfg.contains("g") ? cfg.at("g") : json::object({{"kind", "bumps"}});

  CsvWriter csv(dir / "report.csv");
  csv.row({"cell", "g_norm_s", "lhs", "rhs_shape", "fitted_C", "converged"});

  std::vector<double> fitted;
  bool all_converged = true;
  for (int cell = 0; cell < count; ++cell) {
    json gcell = gspec;
    gcell["seed_offset"] = jint(gspec, "seed_offset", 0) + cell;
    ScalarField g = parse_g(gcell, grid, seed);
    NonlocalProblem prob;
    prob.p = p;
    prob.a = a;
    prob.f = nonlinearity_source(g);
    FixedPointOptions opts;
    opts.schedule = {0.0, 1.0};
    opts.damping = jnum(problem, "damping", 1.0);
    opts.tol_outer = jnum(problem, "tol_outer", 1e-7);
    opts.tol_res = jnum(problem, "tol_res", 1e-5);
    opts.tol_inner = jnum(problem, "tol_inner", 1e-8);
    opts.max_outer = jint(problem, "max_outer", 60);
    const FixedPointReport rep = fixed_point_solve(prob, opts);
    all_converged = all_converged && rep.converged;
    const AprioriCheck chk = apriori_check(rep.u, g, a, p, s);
    fitted.push_back(chk.fitted_C);
    csv.row({std::to_string(cell), fstr(lebesgue_norm(g, s)), fstr(chk.lhs),
             fstr(chk.rhs_shape), fstr(chk.fitted_C), rep.converged ? "1" : "0"});
  }
  const double cmin = *std::min_element(fitted.begin(), fitted.end());
  const double cmax = *std::max_element(fitted.begin(), fitted.end());
  const double spread = cmin > 0.0 ? cmax / cmin : kInf;
  const double omega_ps = omega(p, s);

  RunResult res;
  res.status = (all_converged && spread <= max_spread) ? 0 : 1;
  res.headline = {{"spread", fstr(spread)},
                  {"fitted_C_min", fstr(cmin)},
                  {"fitted_C_max", fstr(cmax)},
                  {"omega_ps", fstr(omega_ps)},
                  {"all_converged", all_converged ? "1" : "0"}};
  return res;
}

RunResult run_exponent_table(const json& cfg, const fs::path& dir) {
  const double p = jnum(cfg, "p", 3.0);
  const int dim = jint(cfg, "dim", 4);
  const double alpha = jnum(cfg, "alpha", 8.0);
  const double R = jnum(cfg, "R", 5.0);
  const double s = jnum(cfg, "s", 50.0);

  std::ostringstream table;
  try {
    print_exponent_table(table, p, dim, alpha, R, s);
  } catch (const std::exception& e) {
    invalid(std::string("exponent-table: ") + e.what());
  }
  CsvWriter csv(dir / "report.csv");
  csv.row({"quantity", "value"});
  std::istringstream lines(table.str());
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) {
      csv.row({line.substr(0, eq), line.substr(eq + 3)});
    }
  }
  std::ofstream txt(dir / "table.txt");
  txt << table.str();

  RunResult res;
  res.headline = {{"p", fstr(p)}, {"N", std::to_string(dim)}};
  return res;
}

RunResult dispatch(const json& cfg, const fs::path& dir) {
  const std::string kind = jstr(cfg, "experiment", "", true);
  if (kind == "solve") return run_solve(cfg, dir);
  if (kind == "manufactured-convergence") return run_manufactured(cfg, dir);
  if (kind == "verify-regularity") return run_verify_regularity(cfg, dir);
  if (kind == "nq-certificate") return run_nq(cfg, dir);
  if (kind == "bound-sweep") return run_bound_sweep(cfg, dir);
  if (kind == "exponent-table") return run_exponent_table(cfg, dir);
  invalid("unknown experiment kind '" + kind + "'");
}

fs::path resolve_out_dir(const json& cfg, const fs::path& out_override) {
  fs::path dir = out_override.empty() ? fs::path(jstr(cfg, "output_dir", "out"))
                                      : out_override;
  if (dir.is_relative()) {
    if (const char* root = std::getenv("PKIRCH_OUT_ROOT")) {
      dir = fs::path(root) / dir;
    }
  }
  fs::create_directories(dir);
  return dir;
}

json parse_config_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(2, std::string("config parse error: ") + e.what());
  }
}

RunResult run_config(const json& cfg, const fs::path& dir) {
  if (!cfg.is_object()) throw ConfigError(3, "config must be a JSON object");
  RunResult res = dispatch(cfg, dir);
  write_summary(dir, cfg, res);
  return res;
}

}  // namespace

void print_exponent_table(std::ostream& os, double p, int dim, double alpha, double R,
                          double s) {
  const ExponentContext ctx = ExponentContext::make(p, dim);
  os << "p = " << format_float(p) << "\n";
  os << "N = " << dim << "\n";
  os << "p_star = " << (ctx.critical_finite() ? format_float(ctx.p_star) : "inf") << "\n";
  os << "lambda = " << (ctx.critical_finite() ? format_float(ctx.lambda) : "inf") << "\n";
  os << "r_s = " << format_float(r_exponent(p, s)) << "\n";
  os << "r_R = " << format_float(r_exponent(p, R)) << "\n";
  os << "omega_p_s = " << format_float(omega(p, s)) << "\n";
  os << "omega_p_R = " << format_float(omega(p, R)) << "\n";
  if (ctx.critical_finite()) {
    const BoundFormula bf = bound_formula(ctx, alpha, R, s);
    os << "q = " << format_float(bf.q) << "\n";
    os << "R_s = " << format_float(bf.R_s) << "\n";
    os << "T_s = " << format_float(bf.T_s) << "\n";
    const bool superlinear = alpha >= p - 1.0 && alpha < ctx.p_star - 1.0;
    const bool sublinear = alpha >= 1.0 && alpha < p - 1.0;
    if (superlinear || sublinear) {
      const MoserLadder ladder = moser_sequence(
          ctx, superlinear ? LadderVariant::superlinear : LadderVariant::sublinear, alpha,
          4);
      os << "variant = " << (superlinear ? "superlinear" : "sublinear") << "\n";
      if (superlinear) {
        os << "delta = " << format_float(ladder.delta) << "\n";
      }
      for (int i = 0; i <= 2; ++i) {
        os << "k" << i << " = " << format_float(ladder.k[static_cast<size_t>(i)]) << "\n";
      }
      const int ns = n_for_target(ladder, ctx, s);
      os << "n_s = " << ns << "\n";
      os << "h_exponent = " << format_float((ns + 1) * ctx.lambda) << "\n";
      os << "h_s(2) = " << format_float(h_poly(ctx, ns, 2.0)) << "\n";
    }
  }
}

RunResult run_experiment_json(const std::string& config_text, const fs::path& out_dir) {
  const json cfg = parse_config_text(config_text);
  fs::create_directories(out_dir);
  return run_config(cfg, out_dir);
}

RunResult run_experiment_file(const fs::path& config_path, const fs::path& out_override) {
  std::ifstream in(config_path);
  if (!in) {
    throw ConfigError(2, "cannot open config file " + config_path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const json cfg = parse_config_text(buf.str());
  if (!cfg.is_object()) throw ConfigError(3, "config must be a JSON object");
  const fs::path dir = resolve_out_dir(cfg, out_override);
  return run_config(cfg, dir);
}

RunResult run_sweep_file(const fs::path& config_path, const fs::path& out_override) {
  std::ifstream in(config_path);
  if (!in) {
    throw ConfigError(2, "cannot open sweep config " + config_path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const json cfg = parse_config_text(buf.str());
  if (!cfg.is_object()) throw ConfigError(3, "sweep config must be a JSON object");
  if (!cfg.contains("base") || !cfg.at("base").is_object()) {
    throw ConfigError(3, "sweep config needs a 'base' run config");
  }
  if (!cfg.contains("parameters") || !cfg.at("parameters").is_array() ||
      cfg.at("parameters").empty()) {
    throw ConfigError(3, "sweep config needs a nonempty 'parameters' array");
  }
  struct Axis {
    std::string path;
    std::vector<json> values;
  };
  std::vector<Axis> axes;
  for (const auto& pj : cfg.at("parameters")) {
    Axis ax;
    ax.path = jstr(pj, "path", "", true);
    if (!pj.contains("values") || !pj.at("values").is_array() || pj.at("values").empty()) {
      throw ConfigError(3, "sweep parameter '" + ax.path + "' needs nonempty values");
    }
    for (const auto& v : pj.at("values")) ax.values.push_back(v);
    axes.push_back(std::move(ax));
  }
  const fs::path dir = resolve_out_dir(cfg, out_override);

  size_t cells = 1;
  for (const auto& ax : axes) cells *= ax.values.size();

  CsvWriter agg(dir / "aggregate.csv");
  {
    std::vector<std::string> header{"cell"};
    for (const auto& ax : axes) header.push_back(ax.path);
    header.push_back("status");
    header.push_back("headline");
    agg.row(header);
  }
  int failures = 0;
  for (size_t cell = 0; cell < cells; ++cell) {
    json run_cfg = cfg.at("base");
    std::vector<std::string> row{std::to_string(cell)};
    size_t rem = cell;
    for (const auto& ax : axes) {
      const json& value = ax.values[rem % ax.values.size()];
      rem /= ax.values.size();
      run_cfg[json::json_pointer("/" + [&] {
        std::string p = ax.path;
        for (auto& ch : p) {
          if (ch == '.') ch = '/';
        }
        return p;
      }())] = value;
      row.push_back(value.dump());
    }
    const fs::path cell_dir = dir / ("cell_" + std::to_string(cell));
    fs::create_directories(cell_dir);
    std::string headline = "-";
    int status = 0;
    try {
      const RunResult r = run_config(run_cfg, cell_dir);
      status = r.status;
      std::ostringstream hs;
      for (const auto& [k, v] : r.headline) hs << k << "=" << v << ";";
      headline = hs.str();
    } catch (const std::exception& e) {
      status = 1;
      headline = std::string("error: ") + e.what();
    }
    failures += status != 0;
    row.push_back(std::to_string(status));
    row.push_back(headline);
    agg.row(row);
  }
  RunResult res;
  res.status = failures > 0 ? 1 : 0;
  res.headline = {{"cells", std::to_string(cells)}, {"failures", std::to_string(failures)}};
  write_summary(dir, cfg, res);
  return res;
}

}  // namespace pkirch
