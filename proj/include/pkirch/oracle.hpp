#ifndef PKIRCH_ORACLE_HPP
#define PKIRCH_ORACLE_HPP

#include <functional>
#include <utility>

#include "pkirch/grid.hpp"

namespace pkirch {

/// Admissible growth interval (low, high] for the radial benchmark profile:
/// (p' - N/(2(p-1)), 2 - N/(2(p-1))], p' = p/(p-1).  Requires p > 2.
std::pair<double, double> admissible_alpha_range(int dim, double p);

/// The radial benchmark u(r) = r^alpha - (alpha/2) r^2 on B(0,1), which by
/// construction has u'(1) = 0.  Its second derivative blows up like
/// r^(alpha-2) at the origin.
struct RadialProfile {
  double alpha = 0.0;
  int dim = 0;
  double p = 0.0;

  static RadialProfile make(double alpha, int dim, double p);

  double u(double r) const;
  double du(double r) const;
  double d2u(double r) const;
  /// |D^2 u| (Frobenius) of the radial function at radius r.
  double hessian_norm(double r) const;
  /// Closed-form Delta_p u = |u'|^(p-2) ((p-1) u'' + (N-1) u'/r).
  double plap(double r) const;
  /// Manufactured right-hand side f = -Delta_p u + u.
  double rhs(double r) const;
};

/// rhs sampled on a radial grid (guards r below the grid's inner cutoff).
ScalarField manufactured_rhs(const RadialProfile& prof, const GridPtr& grid);
ScalarField profile_field(const RadialProfile& prof, const GridPtr& grid);

/// Closed-form energies of the profile by adaptive 1-D quadrature:
/// weighted_hessian = int_{r_lo}^{1} |u'|^(r-2) |D^2 u|^2 dmu and the
/// W^{2,r} cutoff integral eps -> int_{eps}^{1} |D^2 u|^r dmu, with
/// dmu = omega_N s^{N-1} ds.
struct AnalyticEnergies {
  double weighted_hessian = 0.0;
  std::function<double(double)> w2r_cutoff;
  std::function<double(double)> weighted_cutoff;
};

AnalyticEnergies analytic_energies(const RadialProfile& prof, double r_exp,
                                   double quad_tol = 1e-9, double r_lo = 1e-4);

}  // namespace pkirch

#endif  // PKIRCH_ORACLE_HPP
