#include "pkirch/acceptance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pkirch/experiment.hpp"
#include "pkirch/exponents.hpp"
#include "pkirch/fracnorm.hpp"
#include "pkirch/grid.hpp"
#include "pkirch/kirchhoff.hpp"
#include "pkirch/oracle.hpp"
#include "pkirch/plap_solver.hpp"
#include "pkirch/random_fields.hpp"

namespace pkirch {

namespace {

namespace fs = std::filesystem;

struct Check {
  bool ok = true;
  std::ostringstream log;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      log << "[failed] " << what << "; ";
    }
  }
  void note(const std::string& what) { log << what << "; "; }
};

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

GridPtr unit_square(int n) {
  GridSpec gs;
  gs.kind = GridKind::rectangle;
  gs.dim = 2;
  gs.resolution = {n, n};
  return Grid::make(gs);
}

GridPtr radial_grid(int n, int dim = 2) {
  GridSpec gs;
  gs.kind = GridKind::radial_ball;
  gs.dim = dim;
  gs.resolution = {n, n};
  return Grid::make(gs);
}

ScalarField example_g(const GridPtr& grid) {
  return field_from(grid, [](double x, double) { return 1.0 + 0.2 * x; });
}

FixedPointReport solve_example1(int n) {
  const GridPtr grid = unit_square(n);
  auto [a, f] = catalog_example1(3.0, 1.0, 1.0, 1.0, example_g(grid), 1.2);
  NonlocalProblem prob;
  prob.p = 3.0;
  prob.a = a;
  prob.f = f;
  FixedPointOptions opts;  // defaults match the reference config
  return fixed_point_solve(prob, opts);
}

// ---- criterion bodies -----------------------------------------------------

// hand-verified exponent table, zero tolerance (one entry up to float roundoff)
CriterionResult c1_exponents() {
  Check c;
  c.expect(r_exponent(4.0, 3.0) == 8.0, "r_exponent(4,3) == 8");
  c.expect(r_exponent(3.0, 2.0) == 4.0, "r_exponent(3,2) == 4");
  c.expect(omega(3.0, 4.0) == 0.0, "omega(3,4) == 0");
  c.expect(close(omega(2.2, 10.0), 9.0, 1e-12),
           "omega(2.2,10) == 9 (up to double roundoff)");
  const ExponentContext ctx = ExponentContext::make(3.0, 4);
  c.expect(ctx.p_star == 12.0 && ctx.lambda == 4.0, "p* = 12, lambda = 4 at (p=3,N=4)");
  const MoserLadder sup = moser_sequence(ctx, LadderVariant::superlinear, 8.0, 2);
  c.expect(sup.delta == 0.25, "delta == 0.25");
  c.expect(sup.k[0] == 1.0 && sup.k[1] == 5.0 && sup.k[2] == 21.0,
           "superlinear rungs 1, 5, 21");
  const MoserLadder sub = moser_sequence(ctx, LadderVariant::sublinear, 1.5, 2);
  c.expect(sub.k[2] == 15.0, "sublinear k2 == 15");
  c.expect(n_for_target(sup, ctx, 50.0) == 1, "n_for_target(s=50) == 1");
  c.expect(h_poly(ctx, 1, 2.0) == 258.0, "h(2) == 258 at n_s=1");
  return {1, "exponent calculus", c.ok, c.log.str()};
}

CriterionResult c2_manufactured() {
  Check c;
  const RadialProfile prof = RadialProfile::make(1.25, 2, 3.0);
  std::vector<double> errors;
  for (int n : {512, 1024, 2048}) {
    const GridPtr grid = radial_grid(n);
    LocalProblem lp;
    lp.p = 3.0;
    lp.k = 1.0;
    lp.g = manufactured_rhs(prof, grid);
    lp.tol = 1e-9;
    lp.max_iter = 400;
    const SolveReport rep = solve_scaled(lp);
    c.expect(rep.converged, "solver converged at n = " + std::to_string(n));
    const ScalarField exact = profile_field(prof, grid);
    ScalarField diff(grid);
    for (int i = 0; i < diff.size(); ++i) diff[i] = rep.u[i] - exact[i];
    errors.push_back(sobolev_norm(diff, 3.0) / sobolev_norm(exact, 3.0));
  }
  c.note("rel W1p errors " + std::to_string(errors[0]) + " -> " + std::to_string(errors[1]) +
         " -> " + std::to_string(errors[2]));
  c.expect(errors[1] < errors[0] && errors[2] < errors[1],
           "error decreases monotonically over 512 -> 1024 -> 2048");
  c.expect(errors[2] <= 0.02, "relative W1p error <= 2% at 2048 nodes");
  return {2, "manufactured-solution convergence", c.ok, c.log.str()};
}

CriterionResult c3_regularity_dichotomy() {
  Check c;
  const RadialProfile prof = RadialProfile::make(1.25, 2, 3.0);
  std::vector<double> seminorms;
  for (int n : {256, 512, 1024}) {
    const ScalarField u = profile_field(prof, radial_grid(n));
    seminorms.push_back(nikolskii_seminorm(u, 1.5, 4.0).seminorm);
  }
  double stability = 0.0;
  for (double s : seminorms) {
    stability = std::max(stability, std::abs(s - seminorms.back()) / seminorms.back());
  }
  c.note("seminorm " + std::to_string(seminorms.front()) + " -> " +
         std::to_string(seminorms.back()) + ", drift " + std::to_string(stability));
  c.expect(stability < 0.10, "Nikolskii seminorm varies < 10% across 256 -> 1024");

  std::vector<double> cutoffs;
  for (int i = 0; i < 8; ++i) {
    cutoffs.push_back(3e-3 * std::pow(1e-4 / 3e-3, i / 7.0));
  }
  const CutoffRate rate = cutoff_divergence_rate(prof, 4.0, cutoffs);
  c.note("cutoff exponent " + std::to_string(rate.exponent));
  c.expect(close(rate.exponent, -1.0, 0.15), "cutoff divergence exponent within 15% of -1");
  return {3, "regularity dichotomy", c.ok, c.log.str()};
}

CriterionResult c4_normalemma() {
  Check c;
  auto battery_max = [&](bool refined) {
    const int nrect = refined ? 128 : 64;
    const int nrad = refined ? 512 : 256;
    double worst = 0.0;
    auto push = [&](const ScalarField& u) {
      const NormalemmaCheck chk = normalemma_check(u, 4.0);
      c.expect(!chk.degenerate, "battery member is nondegenerate");
      c.expect(std::isfinite(chk.min_constant), "ratio finite");
      worst = std::max(worst, chk.min_constant);
    };
    const GridPtr rect = unit_square(nrect);
    push(field_from(rect, [](double x, double y) { return 0.5 * (x * x + y * y); }));
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
      push(random_bumps(rect, seed));
    }
    for (double alpha : {1.25, 1.4}) {
      push(profile_field(RadialProfile::make(alpha, 2, 3.0), radial_grid(nrad)));
    }
    return worst;
  };
  const double coarse = battery_max(false);
  const double fine = battery_max(true);
  c.note("max ratio " + std::to_string(coarse) + " -> " + std::to_string(fine));
  c.expect(fine > 0.0 && coarse > 0.0, "ratios positive");
  const double change = fine / coarse;
  c.expect(change < 2.0 && change > 0.5, "max ratio changes < x2 under refinement");
  return {4, "seminorm-energy inequality battery", c.ok, c.log.str()};
}

CriterionResult c5_apriori_sweep() {
  Check c;
  const double p = 3.0, s = 3.0;
  c.expect(omega(p, s) == 0.0, "omega-free regime (p >= 3 - 2/s)");
  const GridPtr grid = unit_square(64);
  const KirchhoffTerm a = KirchhoffTerm::example1_log(1.0, 1.0);
  std::vector<double> fitted;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ScalarField g = random_bumps(grid, seed);
    NonlocalProblem prob;
    prob.p = p;
    prob.a = a;
    prob.f = nonlinearity_source(g);
    FixedPointOptions opts;
    opts.schedule = {0.0, 1.0};
    opts.damping = 1.0;
    opts.tol_outer = 1e-7;
    opts.tol_res = 1e-5;
    opts.tol_inner = 1e-8;
    opts.max_outer = 60;
    const FixedPointReport rep = fixed_point_solve(prob, opts);
    c.expect(rep.converged, "cell " + std::to_string(seed) + " converged");
    const AprioriCheck chk = apriori_check(rep.u, g, a, p, s);
    fitted.push_back(chk.fitted_C);
  }
  const double cmin = *std::min_element(fitted.begin(), fitted.end());
  const double cmax = *std::max_element(fitted.begin(), fitted.end());
  c.note("fitted_C in [" + std::to_string(cmin) + ", " + std::to_string(cmax) + "]");
  c.expect(cmin > 0.0 && cmax / cmin < 3.0, "fitted constant spread < x3");
  return {5, "fractional a priori bound sweep", c.ok, c.log.str()};
}

CriterionResult c6_scaling_identity() {
  Check c;
  const double p = 4.0;
  const double tol = 1e-8;
  const GridPtr grid = unit_square(48);
  const ScalarField g = random_bumps(grid, 11);
  const ScalarField v = random_bumps(grid, 12);
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const double b = rng.uniform(1.0, 10.0);  // [a0^{p-1}, 10] at a0 = 1
    const KirchhoffTerm a = KirchhoffTerm::constant(std::pow(b, 1.0 / (p - 1.0)));
    const double t = 0.7;
    const SolveReport rep = solve_linearized(v, t, g, a, p, -1.0, tol);
    const double k = std::pow(b, 1.0 / (p - 2.0));
    LocalProblem lp;
    lp.p = p;
    lp.k = k;
    lp.g = g;
    for (int i = 0; i < lp.g.size(); ++i) lp.g[i] *= t;
    lp.eps = std::min(1e-6 * grid->diameter(), 1e-2 / k);
    lp.tol = tol;
    const double res = residual_l2(rep.u, lp);
    c.expect(res <= tol * std::max(1.0, k) * (1.0 + 1e-9),
             "unscaled residual " + std::to_string(res) + " <= tol*max(1,k) at b = " +
                 std::to_string(b));
  }
  const KirchhoffTerm a1 = KirchhoffTerm::constant(2.0);
  const SolveReport zero = solve_linearized(v, 0.0, g, a1, p, -1.0, tol);
  double zmax = 0.0;
  for (int i = 0; i < zero.u.size(); ++i) zmax = std::max(zmax, std::abs(zero.u[i]));
  c.expect(zmax == 0.0, "homotopy t = 0 returns the zero field exactly");
  return {6, "scaling identity", c.ok, c.log.str()};
}

CriterionResult c7_fixed_point() {
  Check c;
  {
    const FixedPointReport rep = solve_example1(64);
    c.note("example1: iters " + std::to_string(rep.outer_iterations) + ", residual " +
           std::to_string(rep.residual));
    c.expect(rep.converged, "example1 converged");
    c.expect(rep.outer_iterations <= 100, "example1 within 100 damped Picard iterations");
    c.expect(rep.residual <= 1e-4, "example1 nonlocal residual <= 1e-4");
    c.expect(rep.u.max() - rep.u.min() > 1e3 * 1e-6,
             "example1 nonconstant (max - min > 1e3 * tol_outer)");
  }
  {
    const GridPtr grid = unit_square(64);
    auto [a, f] = catalog_example2(3.0, 0.5, 1.0, 1.0, example_g(grid), 0.5);
    NonlocalProblem prob;
    prob.p = 3.0;
    prob.a = a;
    prob.f = f;
    FixedPointOptions opts;
    const FixedPointReport rep = fixed_point_solve(prob, opts);
    c.note("example2: iters " + std::to_string(rep.outer_iterations) + ", residual " +
           std::to_string(rep.residual) + ", range " +
           std::to_string(rep.u.max() - rep.u.min()));
    c.expect(rep.converged, "example2 converged");
    c.expect(rep.outer_iterations <= 100, "example2 within 100 damped Picard iterations");
    c.expect(rep.residual <= 1e-4, "example2 nonlocal residual <= 1e-4");
    // Known red: t*f(x,t) <= -2 g0 |t|^p makes the zero field the unique
    // solution of the example-2 problem (test with u and every term is
    // signed), so no computation can produce a nonconstant solution here.
    c.expect(rep.u.max() - rep.u.min() > 1e3 * 1e-6,
             "example2 nonconstant -- unattainable: the zero field is provably the "
             "unique solution of this configuration");
  }
  return {7, "fixed-point existence at desk scale", c.ok, c.log.str()};
}

CriterionResult c8_nq_certificates() {
  Check c;
  const GridPtr grid = unit_square(64);
  {
    const Nonlinearity nl = nonlinearity_example1(3.0, 1.0, example_g(grid), 1.2);
    const NqCertificate cert = nq_certificate(nl);
    c.note("example1: R " + std::to_string(cert.R) + ", margin " +
           std::to_string(cert.margin));
    c.expect(cert.status == NqStatus::ok, "example1 certificate found");
    c.expect(cert.R >= 1.0 && std::isfinite(cert.R), "finite R");
    c.expect(cert.margin > 0.0, "positive margin");
    Rng rng(31);
    bool bound_holds = true;
    for (int trial = 0; trial < 50; ++trial) {
      const ScalarField u =
          random_nodal(grid, 1000 + static_cast<std::uint64_t>(trial), -200.0, 200.0);
      ScalarField fu(grid);
      for (int i = 0; i < u.size(); ++i) fu[i] = nl.f(nl.g[i], u[i]) * u[i];
      bound_holds = bound_holds && integrate(fu) <= cert.K * (1.0 + 1e-9);
    }
    c.expect(bound_holds, "int f(x,u)u <= K on 50 random bounded fields");
  }
  {
    const Nonlinearity nl = nonlinearity_example1(3.0, 1.0, example_g(grid), 1.5);
    const NqCertificate cert = nq_certificate(nl);
    c.expect(cert.status == NqStatus::precondition_violated,
             "nu >= beta/2 yields a precondition-violation report");
  }
  {
    const double theta = 0.5;
    const Nonlinearity nl = nonlinearity_example2(3.0, 0.5, example_g(grid), theta);
    const NqCertificate cert = nq_certificate(nl);
    const double target = nl.nu * theta * nl.g.min();  // nu * theta * g0
    c.note("example2: margin " + std::to_string(cert.margin) + " vs nu*theta*g0 " +
           std::to_string(target));
    c.expect(cert.status == NqStatus::ok, "example2 certificate found");
    c.expect(std::abs(cert.margin - target) <= 0.25 * target,
             "example2 margin within 25% of nu*theta*g0");
  }
  return {8, "nonquadraticity certificates", c.ok, c.log.str()};
}

CriterionResult c9_moser_ladder() {
  Check c;
  {
    // constant-field closed form at |Omega| = 1
    const GridPtr grid = unit_square(64);
    const ScalarField one = constant_field(grid, 1.0);
    const ExponentContext ctx = ExponentContext::make(3.0, 6);
    const MoserLadder ladder = moser_sequence(ctx, LadderVariant::superlinear, 2.0, 2);
    const auto checks = moser_ladder_check(one, ladder, ctx, 2.0, 64.0);
    c.expect(checks.size() == 3, "three rungs under the exponent cap");
    for (const auto& chk : checks) {
      c.expect(close(chk.min_constant, 1.0 / 3.0, 1e-12),
               "constant-field min_constant == 1/3 at rung " + std::to_string(chk.rung));
    }
  }
  {
    const FixedPointReport rep = solve_example1(64);
    c.expect(rep.converged, "example1 solution available");
    const ExponentContext ctx = ExponentContext::make(3.0, 6);
    const MoserLadder ladder = moser_sequence(ctx, LadderVariant::superlinear, 2.0, 2);
    const auto checks = moser_ladder_check(rep.u, ladder, ctx, 2.0, 64.0);
    c.expect(checks.size() == 3, "three rungs under the cap 64");
    double lo = kInf, hi = 0.0;
    for (const auto& chk : checks) {
      lo = std::min(lo, chk.min_constant);
      hi = std::max(hi, chk.min_constant);
    }
    c.note("rung constants in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    c.expect(lo > 0.0 && hi / lo < 5.0, "rung constants mutually within a factor 5");
  }
  return {9, "iteration-ladder rung constants", c.ok, c.log.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CriterionResult c10_determinism(const fs::path& scratch) {
  Check c;
  const std::string config = R"json({
    "experiment": "solve",
    "seed": 7,
    "grid": {"kind": "rectangle", "dim": 2, "resolution": [64, 64]},
    "problem": {
      "p": 3.0,
      "kirchhoff": {"id": "example1-log", "theta1": 1.0, "theta2": 1.0},
      "nonlinearity": {"id": "example1", "beta": 3.0, "c": 1.0, "nu": 1.2,
                       "g": {"kind": "affine", "c0": 1.0, "cx": 0.2}},
      "homotopy": [0.0, 0.25, 0.5, 0.75, 1.0],
      "damping": 0.5, "tol_outer": 1e-6, "tol_res": 1e-4, "tol_inner": 1e-7,
      "max_outer": 100
    }
  })json";
  const fs::path d1 = scratch / "det_run_a";
  const fs::path d2 = scratch / "det_run_b";
  const RunResult r1 = run_experiment_json(config, d1);
  const RunResult r2 = run_experiment_json(config, d2);
  c.expect(r1.status == 0 && r2.status == 0, "both runs complete");
  for (const char* name : {"report.csv", "field.csv"}) {
    const std::string a = slurp(d1 / name);
    const std::string b = slurp(d2 / name);
    c.expect(!a.empty() && a == b,
             std::string(name) + " byte-identical across repeated runs");
  }
  return {10, "determinism", c.ok, c.log.str()};
}

}  // namespace

CriterionResult run_criterion(int id, const fs::path& scratch) {
  try {
    switch (id) {
      case 1: return c1_exponents();
      case 2: return c2_manufactured();
      case 3: return c3_regularity_dichotomy();
      case 4: return c4_normalemma();
      case 5: return c5_apriori_sweep();
      case 6: return c6_scaling_identity();
      case 7: return c7_fixed_point();
      case 8: return c8_nq_certificates();
      case 9: return c9_moser_ladder();
      case 10: return c10_determinism(scratch);
      default: break;
    }
  } catch (const std::exception& e) {
    return {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()};
  }
  return {id, "unknown criterion", false, "criterion ids run 1.." + std::to_string(kCriterionCount)};
}

int run_acceptance(std::ostream& os, const fs::path& scratch, int only) {
  int failures = 0;
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (only != -1 && id != only) {
      continue;
    }
    const CriterionResult r = run_criterion(id, scratch);
    os << "criterion " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << " - " << r.name;
    if (!r.detail.empty()) {
      os << " (" << r.detail << ")";
    }
    os << "\n";
    failures += r.pass ? 0 : 1;
  }
  return failures;
}

}  // namespace pkirch
