#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pkirch/grid.hpp"
#include "pkirch/oracle.hpp"
#include "pkirch/quadrature.hpp"

using namespace pkirch;

namespace {

GridPtr ball(int n, int dim = 2) {
  GridSpec gs;
  gs.kind = GridKind::radial_ball;
  gs.dim = dim;
  gs.resolution = {n, n};
  return Grid::make(gs);
}

}  // namespace

TEST_CASE("adaptive quadrature") {
  CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0, 1e-12) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-10));
  // signed orientation
  CHECK(adaptive_simpson([](double x) { return x; }, 1.0, 0.0, 1e-12) ==
        doctest::Approx(-0.5).epsilon(1e-12));
  // mildly singular integrand resolved by bisection
  CHECK(adaptive_simpson([](double x) { return 1.0 / std::sqrt(x); }, 1e-6, 1.0, 1e-9) ==
        doctest::Approx(2.0 - 2e-3).epsilon(1e-6));
  CHECK_THROWS_AS(
      adaptive_simpson([](double x) { return 1.0 / std::sqrt(x); }, 1e-12, 1.0, 1e-14, 8),
      QuadratureError);
}

TEST_CASE("admissible growth interval") {
  auto [lo2, hi2] = admissible_alpha_range(2, 3.0);
  CHECK(lo2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(hi2 == doctest::Approx(1.5).epsilon(1e-14));
  auto [lo4, hi4] = admissible_alpha_range(4, 3.0);
  CHECK(lo4 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(hi4 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_NOTHROW(RadialProfile::make(1.5, 2, 3.0));   // upper endpoint included
  CHECK_THROWS_AS(RadialProfile::make(1.0, 2, 3.0), std::invalid_argument);  // lower excluded
  CHECK_THROWS_AS(RadialProfile::make(1.6, 2, 3.0), std::invalid_argument);
}

TEST_CASE("profile satisfies the Neumann wall exactly") {
  for (double alpha : {1.05, 1.25, 1.5}) {
    const RadialProfile prof = RadialProfile::make(alpha, 2, 3.0);
    CHECK(prof.du(1.0) == 0.0);
  }
}

TEST_CASE("manufactured rhs matches the discrete operator away from the cutoff") {
  const RadialProfile prof = RadialProfile::make(1.25, 2, 3.0);
  auto max_err = [&](int n) {
    const GridPtr grid = ball(n);
    const ScalarField u = profile_field(prof, grid);
    const ScalarField f = manufactured_rhs(prof, grid);
    const ScalarField div = p_flux_divergence(u, 3.0, 0.0);
    double err = 0.0;
    for (int i = 0; i < grid->num_nodes(); ++i) {
      const double r = grid->coord(i, 0);
      if (r < 0.2 || r > 0.95) continue;
      err = std::max(err, std::abs(f[i] - (-div[i] + u[i])));
    }
    return err;
  };
  const double e1 = max_err(512);
  const double e2 = max_err(1024);
  CHECK(e2 < e1);
  CHECK(e1 / e2 > 2.5);
}

TEST_CASE("rhs is square integrable") {
  const RadialProfile prof = RadialProfile::make(1.25, 2, 3.0);
  const GridPtr grid = ball(1024);
  const ScalarField f = manufactured_rhs(prof, grid);
  ScalarField f2(grid);
  for (int i = 0; i < grid->num_nodes(); ++i) f2[i] = f[i] * f[i];
  const double val = integrate(f2);
  CHECK(std::isfinite(val));
  CHECK(val == doctest::Approx(3.3404610330).epsilon(2e-3));  // reference quadrature
}

TEST_CASE("analytic energies against reference quadrature") {
  // frozen from an independent adaptive integrator
  const RadialProfile a125 = RadialProfile::make(1.25, 2, 3.0);
  const RadialProfile a14 = RadialProfile::make(1.4, 2, 3.0);
  CHECK(analytic_energies(a125, 4.0, 1e-10).weighted_hessian ==
        doctest::Approx(2.2171678342).epsilon(1e-6));
  CHECK(analytic_energies(a14, 4.0, 1e-10).weighted_hessian ==
        doctest::Approx(0.6347776214).epsilon(1e-6));
}

TEST_CASE("membership dichotomy of the cutoff integrals") {
  const RadialProfile prof = RadialProfile::make(1.3, 2, 3.0);
  const AnalyticEnergies en = analytic_energies(prof, 4.0, 1e-9, 1e-6);
  // weighted integrand is integrable: the cutoff integral converges
  const double w1 = en.weighted_cutoff(1e-3);
  const double w2 = en.weighted_cutoff(1e-5);
  CHECK(std::abs(w2 - w1) / w1 < 0.05);
  // plain |D^2 u|^4 diverges like eps^(4(alpha-2)+2) = eps^(-0.8)
  const double d1 = en.w2r_cutoff(1e-3);
  const double d2 = en.w2r_cutoff(1e-4);
  CHECK(d2 / d1 == doctest::Approx(std::pow(10.0, 0.8)).epsilon(0.2));
}
