#ifndef PKIRCH_KIRCHHOFF_HPP
#define PKIRCH_KIRCHHOFF_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pkirch/exponents.hpp"
#include "pkirch/grid.hpp"
#include "pkirch/kirchhoff_term.hpp"
#include "pkirch/plap_solver.hpp"

namespace pkirch {

/// Nonlinearity f(x,t) = f(g(x), t) with its primitive and the growth metadata
/// of the hypotheses: |f| <= c1(|t|^alpha + 1); either |F|/|t|^beta bounded by
/// c3 at infinity or F/|t|^beta -> -inf (h3_prime); and the nonquadraticity
/// data (nu, sigma, c2).
struct Nonlinearity {
  std::string id;
  ScalarField g;
  std::function<double(double, double)> f;  // (g(x), t)
  std::function<double(double, double)> F;  // empty: primitive by quadrature
  double alpha = 1.0;
  double c1 = 1.0;
  double beta = 0.0;
  double c3 = 0.0;
  bool h3_prime = false;
  double nu = 0.0;
  double sigma = 0.0;
  double c2 = 0.0;
  double quad_tol = 1e-10;

  double eval_f(double gx, double t) const { return f(gx, t); }
  double eval_F(double gx, double t) const;
  ScalarField f_field(const ScalarField& v) const;
  /// Dense-sampling check of |f(x,t)| <= c1(|t|^alpha + 1) over the nodal g
  /// values and |t| <= t_max; throws on violation.
  void validate_growth(double t_max, int samples = 2048) const;
};

/// f(x,t) = -c t (t^2+1)^((beta-2)/2) + g(x).  NQ data for a given nu:
/// sigma = beta, c2 = c(beta-nu)/beta, and the sharp H3 constant c3 = c/beta
/// (so nu*c3 < c2 exactly when nu < beta/2).
Nonlinearity nonlinearity_example1(double beta, double c, ScalarField g, double nu);

/// Oscillatory nonlinearity with primitive
/// F(x,t) = -g(x)(|t|^p + (p-2)|t|^(p-e) sin^2(|t|^e/e)).  With
/// nu = 2/(1+2*theta), the NQ quotient obeys (tf - nu F)/|t|^p <= -(2-nu) g0;
/// c2 carries that sharp constant and H3' holds for any beta < p - e.
Nonlinearity nonlinearity_example2(double p, double eps_exp, ScalarField g, double theta);

/// The catalog pairs: the nonlinearities above with their matching terms
/// a(t) = theta1 ln(1+|t|) + theta2 and the oscillating a(.).
std::pair<KirchhoffTerm, Nonlinearity> catalog_example1(double beta, double c,
                                                        double theta1, double theta2,
                                                        ScalarField g, double nu);
std::pair<KirchhoffTerm, Nonlinearity> catalog_example2(double p, double eps_exp,
                                                        double delta1, double delta2,
                                                        ScalarField g, double theta);

/// f(x,t) = g(x): the right-hand-side-only nonlinearity of the linear-data runs.
Nonlinearity nonlinearity_source(ScalarField g);

struct NonlocalProblem {
  double p = 3.0;
  KirchhoffTerm a = KirchhoffTerm::constant(1.0);
  Nonlinearity f;
  double eps = -1.0;  // regularization; < 0 = default
};

struct FixedPointOptions {
  std::vector<double> schedule{0.0, 0.25, 0.5, 0.75, 1.0};
  double damping = 0.5;
  double tol_outer = 1e-6;
  double tol_res = 1e-4;
  double tol_inner = 1e-7;
  int max_outer = 100;
  double blowup = 1e8;
  /// Intermediate homotopy stages stop at stage_slack * tol_outer.
  double stage_slack = 100.0;
};

struct FixedPointReport {
  ScalarField u;
  bool converged = false;
  bool diverged = false;
  int outer_iterations = 0;
  double residual = kInf;
  double final_theta = 0.0;
  std::vector<double> t_history;        // homotopy value per outer iteration
  std::vector<double> b_history;
  std::vector<double> succ_diff;        // W^{1,p} distance of successive iterates
  std::vector<double> theta_history;
  std::vector<double> schedule;         // t values visited
};

/// Damped Picard realization of the homotopy family: at each t of the schedule
/// iterate v <- (1-theta) v + theta T_t(v), where T_t(v) solves the linearized
/// problem with right-hand side f(.,v); warm-started along the schedule, with
/// theta halved when b(v) oscillates.  Convergence requires the successive
/// W^{1,p} difference under tol_outer at t = 1 and the full nonlocal residual
/// under tol_res.
FixedPointReport fixed_point_solve(const NonlocalProblem& prob,
                                   const FixedPointOptions& opts = {});

ScalarField nonlocal_residual_field(const ScalarField& u, const NonlocalProblem& prob);
double nonlocal_residual(const ScalarField& u, const NonlocalProblem& prob);

enum class NqStatus { ok, precondition_violated, not_found };

struct NqSearch {
  double t_max = 200.0;
  int t_samples = 20000;
  int x_samples = 9;   // quantiles of the nodal g values
  double r_start = 1.0;
};

/// Tail certificate for the uniform-bound argument: locates R >= 1 with
///   -(f t - nu F)/|t|^sigma >= c2 - eps      (NQ tail)
///   F <= (c3 + delta)|t|^beta   or   -F >= delta |t|^beta  (H3 / H3')
///   f(x,t) t <= 0                             (combined tail sign)
/// for all sampled |t| in [R, t_max] and sampled x.  empirical_c2 is the
/// worst tail value of -(ft - nu F)/|t|^sigma, margin its slack over c2 - eps,
/// and K = max_{|t|<=R} |f| * R * |Omega| bounds int f(x,u)u for any bounded u.
struct NqCertificate {
  NqStatus status = NqStatus::not_found;
  double R = 0.0;
  double empirical_c2 = 0.0;
  double margin = 0.0;
  double K = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  std::string note;
};

NqCertificate nq_certificate(const Nonlinearity& nl, const NqSearch& search = {});

}  // namespace pkirch

#endif  // PKIRCH_KIRCHHOFF_HPP
