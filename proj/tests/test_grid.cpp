#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pkirch/exponents.hpp"
#include "pkirch/grid.hpp"
#include "pkirch/oracle.hpp"

using namespace pkirch;

namespace {

GridPtr unit_square(int n) {
  GridSpec gs;
  gs.kind = GridKind::rectangle;
  gs.dim = 2;
  gs.resolution = {n, n};
  return Grid::make(gs);
}

GridPtr ball(int n, int dim = 2, double r_min = 1e-4) {
  GridSpec gs;
  gs.kind = GridKind::radial_ball;
  gs.dim = dim;
  gs.resolution = {n, n};
  gs.r_min = r_min;
  return Grid::make(gs);
}

}  // namespace

TEST_CASE("grid construction invariants") {
  const GridPtr rect = unit_square(16);
  CHECK(rect->num_nodes() == 256);
  CHECK(rect->measure() == doctest::Approx(1.0).epsilon(1e-14));
  const GridPtr rad = ball(64);
  const auto& r = rad->radial_nodes();
  CHECK(r.front() == 1e-4);
  CHECK(r.back() == 1.0);
  for (size_t i = 1; i < r.size(); ++i) {
    CHECK(r[i] > r[i - 1]);
  }
  double vol = 0.0;
  for (int i = 0; i < rad->num_nodes(); ++i) vol += rad->node_volume(i);
  CHECK(vol == doctest::Approx(rad->measure()).epsilon(1e-12));
  CHECK_THROWS_AS(Grid::make(GridSpec{GridKind::rectangle, 2, {4, 4}, {1, 1}}),
                  std::invalid_argument);
}

TEST_CASE("gradient exact on linears, zero on constants") {
  const GridPtr grid = unit_square(32);
  const ScalarField lin = field_from(grid, [](double x, double) { return 3.0 * x + 2.0; });
  const VectorField g = gradient(lin);
  for (int j = 1; j < 31; ++j) {
    for (int i = 1; i < 31; ++i) {
      const int n = grid->index(i, j);
      CHECK(g.comp[0][n] == doctest::Approx(3.0).epsilon(1e-13));
      CHECK(g.comp[1][n] == doctest::Approx(0.0).epsilon(1e-13));
    }
  }
  const VectorField gz = gradient(constant_field(grid, 4.2));
  for (int n = 0; n < grid->num_nodes(); ++n) {
    CHECK(gz.comp[0][n] == 0.0);
    CHECK(gz.comp[1][n] == 0.0);
  }
}

TEST_CASE("gradient exact on quadratics at interior nodes") {
  const GridPtr grid = unit_square(64);
  const ScalarField u = field_from(grid, [](double x, double y) { return 0.5 * (x * x + y * y); });
  const VectorField g = gradient(u);
  double err = 0.0;
  for (int j = 1; j < 63; ++j) {
    for (int i = 1; i < 63; ++i) {
      const int n = grid->index(i, j);
      err = std::max(err, std::abs(g.comp[0][n] - grid->coord(n, 0)));
      err = std::max(err, std::abs(g.comp[1][n] - grid->coord(n, 1)));
    }
  }
  CHECK(err < 1e-12);
}

TEST_CASE("hessian exactness") {
  const GridPtr grid = unit_square(32);
  const HessianField zero = hessian(field_from(grid, [](double x, double y) { return 1.0 + x - 2.0 * y; }));
  for (int n = 0; n < grid->num_nodes(); ++n) {
    CHECK(std::abs(zero.xx[n]) < 1e-12);
    CHECK(std::abs(zero.yy[n]) < 1e-12);
    CHECK(std::abs(zero.xy[n]) < 1e-12);
  }
  const HessianField id = hessian(field_from(grid, [](double x, double y) { return 0.5 * (x * x + y * y); }));
  for (int n = 0; n < grid->num_nodes(); ++n) {
    CHECK(id.xx[n] == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(id.yy[n] == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(std::abs(id.xy[n]) < 1e-11);
    CHECK(id.frobenius_sq(n) == doctest::Approx(2.0).epsilon(1e-10));
  }
}

TEST_CASE("radial hessian eigenvalues converge at second order") {
  const double alpha = 1.25;
  auto eig_error = [&](int n) {
    const GridPtr grid = ball(n);
    ScalarField u(grid);
    for (int i = 0; i < grid->num_nodes(); ++i) {
      u[i] = std::pow(grid->coord(i, 0), alpha);
    }
    const HessianField h = hessian(u);
    double err = 0.0;
    for (int i = 1; i < grid->num_nodes() - 1; ++i) {
      const double r = grid->coord(i, 0);
      if (r < 0.2 || r > 0.9) continue;  // away from the graded end and the wall
      err = std::max(err, std::abs(h.rr[i] - alpha * (alpha - 1.0) * std::pow(r, alpha - 2.0)));
      err = std::max(err, std::abs(h.tt[i] - alpha * std::pow(r, alpha - 2.0)));
    }
    return err;
  };
  const double e1 = eig_error(256);
  const double e2 = eig_error(512);
  CHECK(e2 < e1);
  CHECK(e1 / e2 > 3.0);  // ~4 for a second-order stencil
}

TEST_CASE("p-flux divergence trivial fields") {
  const GridPtr grid = unit_square(24);
  const ScalarField c = constant_field(grid, 2.5);
  const ScalarField dc = p_flux_divergence(c, 3.0, 0.0);
  for (int n = 0; n < grid->num_nodes(); ++n) {
    CHECK(dc[n] == 0.0);
  }
  const ScalarField lin = field_from(grid, [](double x, double y) { return 1.0 + 2.0 * x - y; });
  const ScalarField dl = p_flux_divergence(lin, 3.0, 0.0);
  for (int n = 0; n < grid->num_nodes(); ++n) {
    CHECK(std::abs(dl[n]) < 1e-11);  // constant flux
  }
}

TEST_CASE("radial p-flux divergence matches the closed form") {
  const RadialProfile prof = RadialProfile::make(1.25, 2, 3.0);
  auto err_away = [&](int n) {
    const GridPtr grid = ball(n);
    ScalarField u(grid);
    for (int i = 0; i < grid->num_nodes(); ++i) {
      u[i] = prof.u(grid->coord(i, 0));
    }
    const ScalarField d = p_flux_divergence(u, 3.0, 0.0);
    double err = 0.0;
    for (int i = 0; i < grid->num_nodes(); ++i) {
      const double r = grid->coord(i, 0);
      if (r < 0.2 || r > 0.95) continue;
      err = std::max(err, std::abs(d[i] - prof.plap(r)));
    }
    return err;
  };
  const double e1 = err_away(512);
  const double e2 = err_away(1024);
  CHECK(e2 < e1);
  CHECK(e1 / e2 > 2.5);  // second order away from r_min
}

TEST_CASE("quadrature") {
  CHECK(integrate(constant_field(unit_square(64), 1.0)) == doctest::Approx(1.0).epsilon(1e-12));
  const GridPtr disc = ball(256);
  CHECK(integrate(constant_field(disc, 1.0)) == doctest::Approx(M_PI).epsilon(1e-6));
  ScalarField w(disc);
  for (int i = 0; i < disc->num_nodes(); ++i) {
    w[i] = disc->coord(i, 0);
  }
  CHECK(integrate(w) == doctest::Approx(2.0 * M_PI / 3.0).epsilon(1e-5));
}

TEST_CASE("shift restriction") {
  const GridPtr grid = unit_square(65);  // h = 1/64, shifts land on nodes
  const ScalarField lin = field_from(grid, [](double x, double) { return 2.0 * x; });
  const ShiftRestrict one = shift_restrict(lin, 0, 1);
  for (int j = one.lo[1]; j <= one.hi[1]; ++j) {
    for (int i = one.lo[0]; i <= one.hi[0]; ++i) {
      const int n = grid->index(i, j);
      CHECK(one.shifted[n] - lin[n] == doctest::Approx(2.0 / 64.0).epsilon(1e-12));
    }
  }
  const ShiftRestrict quarter = shift_restrict(lin, 0, 16);
  CHECK(quarter.h == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(quarter.mask_measure == doctest::Approx(0.25).epsilon(1e-12));

  const ScalarField c = constant_field(grid, 3.0);
  const ShiftRestrict sc = shift_restrict(c, 1, 4);
  for (int j = sc.lo[1]; j <= sc.hi[1]; ++j) {
    for (int i = sc.lo[0]; i <= sc.hi[0]; ++i) {
      CHECK(sc.shifted[grid->index(i, j)] == c[grid->index(i, j)]);
    }
  }
  CHECK_THROWS_AS(shift_restrict(lin, 0, 40), std::invalid_argument);
  CHECK_THROWS_AS(shift_restrict(constant_field(ball(64), 1.0), 0, 2), std::invalid_argument);
}

TEST_CASE("truncations") {
  const GridPtr grid = unit_square(16);
  auto [p1, m1] = truncate_parts(constant_field(grid, -2.0), 1.0);
  CHECK(p1.max() == 0.0);
  CHECK(m1.min() == 1.0);
  auto [p2, m2] = truncate_parts(constant_field(grid, 5.0), 3.0);
  CHECK(p2.max() == 3.0);
  CHECK(p2.min() == 3.0);
  const ScalarField u = field_from(grid, [](double x, double y) { return x - y; });
  auto [p3, m3] = truncate_parts(u, kInf);
  for (int n = 0; n < grid->num_nodes(); ++n) {
    CHECK(p3[n] == std::max(u[n], 0.0));
    CHECK(m3[n] == std::max(-u[n], 0.0));
  }
}

TEST_CASE("discrete integration by parts is boundary-consistent") {
  const double p = 3.0;
  auto residual = [&](int n) {
    const GridPtr grid = unit_square(n);
    const ScalarField u = field_from(grid, [](double x, double y) {
      return std::cos(M_PI * x) * std::cos(M_PI * y) + 0.3 * std::cos(2.0 * M_PI * x);
    });
    const ScalarField v = field_from(grid, [](double x, double y) {
      return std::cos(M_PI * x) * std::cos(M_PI * y) + 0.5 * std::cos(M_PI * x) * std::cos(2.0 * M_PI * y);
    });
    const ScalarField div = p_flux_divergence(u, p, 0.0);
    const VectorField gu = gradient(u);
    const VectorField gv = gradient(v);
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < grid->num_nodes(); ++i) {
      lhs += grid->node_volume(i) * div[i] * v[i];
      const double phi = std::pow(gu.magnitude_sq(i), 0.5 * (p - 2.0));
      rhs += grid->node_volume(i) * phi *
             (gu.comp[0][i] * gv.comp[0][i] + gu.comp[1][i] * gv.comp[1][i]);
    }
    return std::abs(lhs + rhs);
  };
  const double r1 = residual(32);
  const double r2 = residual(64);
  CHECK(r2 < r1);  // O(h) boundary-consistent residual
  CHECK(r1 < 0.5);
}

TEST_CASE("finiteness guard") {
  const GridPtr grid = unit_square(16);
  ScalarField bad(grid);
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(bad.check_finite("test"), std::runtime_error);
}
