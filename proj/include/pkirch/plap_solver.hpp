#ifndef PKIRCH_PLAP_SOLVER_HPP
#define PKIRCH_PLAP_SOLVER_HPP

#include <optional>
#include <vector>

#include "pkirch/grid.hpp"
#include "pkirch/kirchhoff_term.hpp"

namespace pkirch {

/// Scaled local problem -k^(p-2) Delta_p u + u = g with homogeneous Neumann
/// walls, regularized by eps near vanishing gradients.
struct LocalProblem {
  double p = 3.0;
  double k = 1.0;
  ScalarField g;
  double eps = -1.0;  // < 0: use the default 1e-6 * domain diameter
  double tol = 1e-9;
  int max_iter = 500;

  double eps_value() const;
  void validate() const;
};

struct SolveReport {
  ScalarField u;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;
  std::vector<double> energy_history;
};

/// J(u) = (k^(p-2)/p) int (|grad u|^2 + eps^2)^(p/2) + 1/2 int u^2 - int g u.
double energy(const ScalarField& u, const LocalProblem& prob);

/// Pointwise strong-form residual -k^(p-2) Delta_p^eps u + u - g of the
/// discrete variational problem (the L2 gradient of the energy).
ScalarField residual_field(const ScalarField& u, const LocalProblem& prob);
double residual_l2(const ScalarField& u, const LocalProblem& prob);

/// Energy descent: each step solves the frozen-coefficient (Picard) SPD
/// linearization for the direction and backtracks on J (Armijo, halving).
/// Stops when the L2 residual falls under prob.tol; nonconvergence is a flag,
/// NaN in the iterates is a hard error.
SolveReport solve_scaled(const LocalProblem& prob, const ScalarField& guess);
SolveReport solve_scaled(const LocalProblem& prob);

/// One linearized step of the nonlocal problem: computes
/// b = a(||v||^p_{W^{1,p}})^{p-1}, k = b^{1/(p-2)}, solves the scaled problem
/// with right-hand side t*k*g, and returns u = u_hat / k, whose residual in
/// -b Delta_p u + u = t g is at most tol * max(1, k).  t = 0 short-circuits
/// to the exact zero field.
SolveReport solve_linearized(const ScalarField& v, double t, const ScalarField& g,
                             const KirchhoffTerm& a, double p, double eps, double tol,
                             const ScalarField* warm_start = nullptr);

/// Same with the nonlocal coefficient already evaluated.
SolveReport solve_linearized_b(double b, double t, const ScalarField& g, double p,
                               double eps, double tol,
                               const ScalarField* warm_start = nullptr);

}  // namespace pkirch

#endif  // PKIRCH_PLAP_SOLVER_HPP
