#ifndef PKIRCH_FRACNORM_HPP
#define PKIRCH_FRACNORM_HPP

#include <array>
#include <vector>

#include "pkirch/exponents.hpp"
#include "pkirch/grid.hpp"
#include "pkirch/kirchhoff_term.hpp"
#include "pkirch/oracle.hpp"

namespace pkirch {

/// (int |u|^s)^(1/s); s = +inf gives max |u|.  Requires s >= 1.
double lebesgue_norm(const ScalarField& u, double s);

/// (int |grad u|^p + int |u|^p)^(1/p), the W^{1,p} convention used throughout.
double sobolev_norm(const ScalarField& u, double p);

/// Axis-aligned lattice shifts for the difference quotients: physical lengths
/// log-spaced in [max(one cell, min_fraction * extent), max_fraction * extent],
/// rounded to whole cells.
struct ShiftSet {
  double min_fraction = 0.0;
  double max_fraction = 0.25;
  int count = 12;
};

struct ShiftSample {
  int component = 0;  // gradient component
  int axis = 0;       // shift direction
  double h = 0.0;
  double value = 0.0;  // (int_{Omega_h} |D_h grad_i u|^r)^(1/r) / h^(sigma-1)
};

/// Difference-quotient seminorm sum_i sup_h of the per-shift quotient, with
/// denominator |h|^((sigma-1) r) inside the integral.  Radial grids are
/// resampled onto a uniform auxiliary grid in r (graded nodes do not carry
/// lattice shifts) and weighted by omega_N r^(N-1).
struct NikolskiiEstimate {
  double sigma = 0.0;
  double r = 0.0;
  double seminorm = 0.0;
  int argmax_component = 0;
  int argmax_axis = 0;
  double argmax_h = 0.0;
  std::vector<ShiftSample> table;
};

NikolskiiEstimate nikolskii_seminorm(const ScalarField& u, double sigma, double r,
                                     const ShiftSet& shifts = {});

/// ||u||_{N^{sigma,r}} = ||u||_{W^{1,r}} + [[u]].
double nikolskii_norm(const ScalarField& u, double sigma, double r,
                      const ShiftSet& shifts = {});

/// int (|grad u|^2)^((r-2)/2) |D^2 u|^2 with the Frobenius Hessian norm.
double weighted_hessian_energy(const ScalarField& u, double r);

/// Both sides of the seminorm-vs-weighted-energy inequality at sigma = 1+2/r:
/// lhs = [[u]]^r, rhs = the weighted energy, min_constant = lhs/rhs.
struct NormalemmaCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double min_constant = 0.0;
  bool degenerate = false;  // rhs vanished
};

NormalemmaCheck normalemma_check(const ScalarField& u, double r,
                                 const ShiftSet& shifts = {});

/// One rung of the bootstrap inequality: lhs = ||u_+||_{L^{p*(k_n+1)}} against
///   superlinear: 1 + ||u_+||_{L^m} + ||u_+||_{L^m}^{m/(p(k_n+1))}, m = alpha + k_n p + 1;
///   sublinear:   1 + ||u_+||_{L^m},                               m = (k_n+1) p.
struct LadderCheck {
  int rung = 0;
  double exponent = 0.0;
  double lhs = 0.0;
  std::array<double, 3> rhs_parts{0.0, 0.0, 0.0};
  double min_constant = 0.0;
};

std::vector<LadderCheck> moser_ladder_check(const ScalarField& u, const MoserLadder& ladder,
                                            const ExponentContext& ctx, double alpha,
                                            double exponent_cap = 64.0);

/// Fractional-energy a priori shape: lhs = ||u||_{N^{1+2/r_s, r_s}},
/// rhs_shape = 1 + ||g||_{L^s} + a(||u||^p_{W^{1,p}})^{omega_{p,s}} ||g||_{L^s}^{s/r_s}.
struct AprioriCheck {
  double lhs = 0.0;
  double rhs_shape = 0.0;
  double fitted_C = 0.0;
  double omega_ps = 0.0;
  double r_s = 0.0;
};

AprioriCheck apriori_check(const ScalarField& u, const ScalarField& g,
                           const KirchhoffTerm& a, double p, double s,
                           const ShiftSet& shifts = {});

enum class BoundBranch { subcritical_superlinear, subcritical_sublinear, supercritical };

/// L-infinity bound shape with branch dispatch on (p, N, alpha):
/// p < N with alpha >= p-1, p < N with alpha < p-1, and p >= N.
struct LinftyCheck {
  BoundBranch branch = BoundBranch::supercritical;
  double lhs = 0.0;
  double rhs = 0.0;
  double fitted_C = 0.0;
};

LinftyCheck linfty_bound_check(const ScalarField& u, const KirchhoffTerm& a,
                               const ExponentContext& ctx, double alpha, double R,
                               double s);

/// Power-law fit of E(eps) = int_{|x| > eps} |D^2 u|^r dmu (weighted variant:
/// |grad u|^{r-2} |D^2 u|^2) on the analytic profile; exponent is the slope of
/// log E against log eps, and log_case reports whether a logarithmic model
/// E = a + b log(1/eps) fits better (the admissible-endpoint case).
struct CutoffRate {
  double exponent = 0.0;
  bool log_case = false;
  double r2_power = 0.0;
  double r2_log = 0.0;
  std::vector<double> cutoffs;
  std::vector<double> values;
};

CutoffRate cutoff_divergence_rate(const RadialProfile& prof, double r,
                                  const std::vector<double>& cutoffs,
                                  bool weighted = false, double quad_tol = 1e-9);

}  // namespace pkirch

#endif  // PKIRCH_FRACNORM_HPP
