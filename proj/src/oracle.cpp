#include "pkirch/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pkirch/quadrature.hpp"

namespace pkirch {

std::pair<double, double> admissible_alpha_range(int dim, double p) {
  if (!(p > 2.0) || dim < 2) {
    throw std::invalid_argument("admissible_alpha_range: requires p > 2, N >= 2");
  }
  const double p_conj = p / (p - 1.0);
  const double low = p_conj - dim / (2.0 * (p - 1.0));
  const double high = 2.0 - dim / (2.0 * (p - 1.0));
  if (!(low < high)) {
    throw std::logic_error("admissible_alpha_range: empty interval");  // p' < 2 for p > 2
  }
  return {low, high};
}

RadialProfile RadialProfile::make(double alpha, int dim, double p) {
  const auto [low, high] = admissible_alpha_range(dim, p);
  if (!(alpha > low) || !(alpha <= high)) {
    throw std::invalid_argument("RadialProfile: alpha " + std::to_string(alpha) +
                                " outside (" + std::to_string(low) + ", " +
                                std::to_string(high) + "]");
  }
  RadialProfile prof;
  prof.alpha = alpha;
  prof.dim = dim;
  prof.p = p;
  return prof;
}

double RadialProfile::u(double r) const { return std::pow(r, alpha) - 0.5 * alpha * r * r; }

double RadialProfile::du(double r) const { return alpha * (std::pow(r, alpha - 1.0) - r); }

double RadialProfile::d2u(double r) const {
  return alpha * ((alpha - 1.0) * std::pow(r, alpha - 2.0) - 1.0);
}

double RadialProfile::hessian_norm(double r) const {
  const double lr = du(r) / r;
  const double lrr = d2u(r);
  return std::sqrt(lrr * lrr + (dim - 1) * lr * lr);
}

double RadialProfile::plap(double r) const {
  const double g = du(r);
  return std::pow(std::abs(g), p - 2.0) * ((p - 1.0) * d2u(r) + (dim - 1) * g / r);
}

double RadialProfile::rhs(double r) const { return -plap(r) + u(r); }

ScalarField manufactured_rhs(const RadialProfile& prof, const GridPtr& grid) {
  if (grid->kind() != GridKind::radial_ball) {
    throw std::invalid_argument("manufactured_rhs: radial grid required");
  }
  if (grid->dim() != prof.dim) {
    throw std::invalid_argument("manufactured_rhs: grid dimension does not match profile");
  }
  ScalarField out(grid);
  for (int i = 0; i < grid->num_nodes(); ++i) {
    const double r = grid->coord(i, 0);
    if (r < grid->r_min()) {
      throw std::domain_error("manufactured_rhs: node below the inner cutoff");
    }
    out[i] = prof.rhs(r);
  }
  out.check_finite("manufactured_rhs");
  return out;
}

ScalarField profile_field(const RadialProfile& prof, const GridPtr& grid) {
  if (grid->kind() != GridKind::radial_ball) {
    throw std::invalid_argument("profile_field: radial grid required");
  }
  ScalarField out(grid);
  for (int i = 0; i < grid->num_nodes(); ++i) {
    out[i] = prof.u(grid->coord(i, 0));
  }
  out.check_finite("profile_field");
  return out;
}

AnalyticEnergies analytic_energies(const RadialProfile& prof, double r_exp,
                                   double quad_tol, double r_lo) {
  if (!(r_exp > 2.0)) {
    throw std::invalid_argument("analytic_energies: requires r > 2");
  }
  const double omega_n = 2.0 * std::pow(M_PI, 0.5 * prof.dim) / std::tgamma(0.5 * prof.dim);
  const double nm1 = prof.dim - 1.0;

  auto weighted_integrand = [prof, r_exp, omega_n, nm1](double s) {
    const double g = prof.du(s);
    const double h = prof.hessian_norm(s);
    return std::pow(g * g, 0.5 * (r_exp - 2.0)) * h * h * omega_n * std::pow(s, nm1);
  };
  auto w2r_integrand = [prof, r_exp, omega_n, nm1](double s) {
    return std::pow(prof.hessian_norm(s), r_exp) * omega_n * std::pow(s, nm1);
  };

  AnalyticEnergies out;
  out.weighted_hessian = adaptive_simpson(weighted_integrand, r_lo, 1.0, quad_tol);
  out.w2r_cutoff = [w2r_integrand, quad_tol](double eps) {
    return adaptive_simpson(w2r_integrand, eps, 1.0, quad_tol);
  };
  out.weighted_cutoff = [weighted_integrand, quad_tol](double eps) {
    return adaptive_simpson(weighted_integrand, eps, 1.0, quad_tol);
  };
  return out;
}

}  // namespace pkirch
