#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pkirch/fracnorm.hpp"
#include "pkirch/grid.hpp"
#include "pkirch/kirchhoff.hpp"
#include "pkirch/oracle.hpp"
#include "pkirch/random_fields.hpp"

using namespace pkirch;

namespace {

GridPtr unit_square(int n) {
  GridSpec gs;
  gs.kind = GridKind::rectangle;
  gs.dim = 2;
  gs.resolution = {n, n};
  return Grid::make(gs);
}

GridPtr ball(int n) {
  GridSpec gs;
  gs.kind = GridKind::radial_ball;
  gs.dim = 2;
  gs.resolution = {n, n};
  return Grid::make(gs);
}

}  // namespace

TEST_CASE("Lebesgue norms") {
  const GridPtr grid = unit_square(32);
  CHECK(lebesgue_norm(constant_field(grid, 2.0), 3.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(lebesgue_norm(constant_field(grid, 2.0), kInf) == 2.0);
  const GridPtr disc = ball(512);
  ScalarField w(disc);
  for (int i = 0; i < disc->num_nodes(); ++i) w[i] = disc->coord(i, 0);
  CHECK(lebesgue_norm(w, 2.0) == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-4));
  CHECK_THROWS_AS(lebesgue_norm(w, 0.5), std::invalid_argument);
}

TEST_CASE("Sobolev norms") {
  const GridPtr grid = unit_square(64);
  const double c = 1.3;
  CHECK(sobolev_norm(constant_field(grid, c), 3.0) == doctest::Approx(c).epsilon(1e-12));
  const ScalarField lin = field_from(grid, [](double x, double) { return x; });
  CHECK(sobolev_norm(lin, 2.0) == doctest::Approx(std::sqrt(1.0 + 1.0 / 3.0)).epsilon(1e-3));
  CHECK(sobolev_norm(constant_field(grid, 0.0), 3.0) == 0.0);
}

TEST_CASE("difference-quotient seminorm closed forms") {
  const GridPtr grid = unit_square(65);  // shifts land exactly on nodes
  const ScalarField affine = field_from(grid, [](double x, double y) { return 2.0 * x - y; });
  CHECK(nikolskii_seminorm(affine, 1.5, 4.0).seminorm == doctest::Approx(0.0).epsilon(1e-13));

  const ScalarField quad = field_from(grid, [](double x, double y) { return 0.5 * (x * x + y * y); });
  const NikolskiiEstimate est = nikolskii_seminorm(quad, 1.5, 4.0);
  // per-axis sup h^(1/2) |Omega_h|^(1/4) at h = 1/4: 0.5 * 0.25^(1/4) per component
  const double per_axis = 0.5 * std::pow(0.25, 0.25);
  CHECK(est.seminorm == doctest::Approx(2.0 * per_axis).epsilon(1e-12));
  CHECK(est.argmax_h == doctest::Approx(0.25).epsilon(1e-12));

  CHECK_THROWS_AS(nikolskii_seminorm(quad, 2.5, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(nikolskii_seminorm(quad, 1.5, 4.0, ShiftSet{0.0, 0.25, 0}),
                  std::invalid_argument);
}

TEST_CASE("seminorm homogeneity") {
  const GridPtr grid = unit_square(48);
  const ScalarField u = random_bumps(grid, 17);
  ScalarField cu(grid);
  const double c = -2.7;
  for (int i = 0; i < u.size(); ++i) cu[i] = c * u[i];
  const double a = nikolskii_seminorm(u, 1.4, 3.0).seminorm;
  const double b = nikolskii_seminorm(cu, 1.4, 3.0).seminorm;
  CHECK(b == doctest::Approx(std::abs(c) * a).epsilon(1e-11));
}

TEST_CASE("radial seminorm of the benchmark profile is refinement-stable") {
  const RadialProfile prof = RadialProfile::make(1.25, 2, 3.0);
  const double s256 = nikolskii_seminorm(profile_field(prof, ball(256)), 1.5, 4.0).seminorm;
  const double s512 = nikolskii_seminorm(profile_field(prof, ball(512)), 1.5, 4.0).seminorm;
  CHECK(std::abs(s256 - s512) / s512 < 0.10);
}

TEST_CASE("weighted Hessian energy") {
  const GridPtr grid = unit_square(64);
  const ScalarField affine = field_from(grid, [](double x, double y) { return 1.0 + x + y; });
  CHECK(weighted_hessian_energy(affine, 4.0) == doctest::Approx(0.0).epsilon(1e-12));
  const ScalarField quad = field_from(grid, [](double x, double y) { return 0.5 * (x * x + y * y); });
  CHECK(weighted_hessian_energy(quad, 4.0) == doctest::Approx(4.0 / 3.0).epsilon(2e-3));
  CHECK_THROWS_AS(weighted_hessian_energy(quad, 2.0), std::invalid_argument);

  const RadialProfile prof = RadialProfile::make(1.25, 2, 3.0);
  const double discrete = weighted_hessian_energy(profile_field(prof, ball(2048)), 4.0);
  const double analytic = analytic_energies(prof, 4.0, 1e-10).weighted_hessian;
  CHECK(discrete == doctest::Approx(analytic).epsilon(0.01));
}

TEST_CASE("seminorm-energy inequality check") {
  const GridPtr grid = unit_square(64);
  const ScalarField affine = field_from(grid, [](double x, double y) { return x - 3.0 * y; });
  const NormalemmaCheck deg = normalemma_check(affine, 4.0);
  CHECK(deg.degenerate);
  CHECK(deg.lhs == doctest::Approx(0.0).epsilon(1e-12));

  const ScalarField quad = field_from(grid, [](double x, double y) { return 0.5 * (x * x + y * y); });
  const NormalemmaCheck chk = normalemma_check(quad, 4.0);
  CHECK(!chk.degenerate);
  CHECK(std::isfinite(chk.min_constant));
  CHECK(chk.min_constant > 0.0);
  // battery stability under one refinement
  double worst64 = chk.min_constant, worst128 = 0.0;
  for (std::uint64_t seed = 40; seed < 48; ++seed) {
    worst64 = std::max(worst64, normalemma_check(random_bumps(unit_square(64), seed), 4.0).min_constant);
    worst128 = std::max(worst128, normalemma_check(random_bumps(unit_square(128), seed), 4.0).min_constant);
  }
  worst128 = std::max(worst128,
                      normalemma_check(field_from(unit_square(128),
                                                  [](double x, double y) {
                                                    return 0.5 * (x * x + y * y);
                                                  }),
                                       4.0)
                          .min_constant);
  CHECK(worst128 / worst64 < 2.0);
  CHECK(worst128 / worst64 > 0.5);
}

TEST_CASE("ladder rung checks") {
  const GridPtr grid = unit_square(48);
  const ExponentContext ctx = ExponentContext::make(3.0, 6);
  const MoserLadder ladder = moser_sequence(ctx, LadderVariant::superlinear, 2.0, 3);

  const auto zero = moser_ladder_check(constant_field(grid, 0.0), ladder, ctx, 2.0, 64.0);
  for (const auto& chk : zero) {
    CHECK(chk.min_constant == 0.0);
  }
  const auto ones = moser_ladder_check(constant_field(grid, 1.0), ladder, ctx, 2.0, 64.0);
  CHECK(ones.size() == 3);  // exponents 12, 24, 48 under the cap
  for (const auto& chk : ones) {
    CHECK(chk.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(chk.rhs_parts[0] == 1.0);
    CHECK(chk.rhs_parts[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(chk.rhs_parts[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(chk.min_constant == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  // sublinear variant drops the power term
  const MoserLadder sub = moser_sequence(ctx, LadderVariant::sublinear, 1.5, 3);
  const auto subchk = moser_ladder_check(constant_field(grid, 1.0), sub, ctx, 1.5, 64.0);
  CHECK(!subchk.empty());
  CHECK(subchk.front().rhs_parts[2] == 0.0);
  CHECK(subchk.front().min_constant == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("a priori shape check") {
  const GridPtr grid = unit_square(48);
  const KirchhoffTerm a = KirchhoffTerm::example1_log(1.0, 1.0);
  const AprioriCheck trivial =
      apriori_check(constant_field(grid, 0.0), constant_field(grid, 0.0), a, 3.0, 3.0);
  CHECK(trivial.lhs == 0.0);
  CHECK(trivial.fitted_C == 0.0);
  CHECK(trivial.omega_ps == 0.0);  // p = 3 >= 3 - 2/s
  CHECK(trivial.rhs_shape == doctest::Approx(1.0).epsilon(1e-12));

  const ScalarField g = random_bumps(grid, 2);
  const ScalarField u = random_bumps(grid, 3);
  const AprioriCheck chk = apriori_check(u, g, a, 3.0, 3.0);
  const double gn = lebesgue_norm(g, 3.0);
  CHECK(chk.rhs_shape ==
        doctest::Approx(1.0 + gn + std::pow(gn, 3.0 / 5.0)).epsilon(1e-12));
  CHECK(chk.r_s == 5.0);
}

TEST_CASE("L-infinity bound branches") {
  const GridPtr grid = unit_square(48);
  const KirchhoffTerm a = KirchhoffTerm::constant(1.5);

  const ExponentContext sub = ExponentContext::make(3.0, 4);
  const LinftyCheck zero = linfty_bound_check(constant_field(grid, 0.0), a, sub, 1.5, 5.0, 3.0);
  CHECK(zero.fitted_C == 0.0);
  CHECK(zero.branch == BoundBranch::subcritical_sublinear);

  const ScalarField u = random_bumps(grid, 12);
  const LinftyCheck prop3 = linfty_bound_check(u, a, sub, 1.5, 5.0, 3.0);
  const double u12 = lebesgue_norm(u, 12.0);
  const double expected = 1.0 + 1.0 + std::pow(u12, 1.5) + std::pow(u12, 7.5 / 7.0);
  CHECK(prop3.rhs == doctest::Approx(expected).epsilon(1e-12));

  CHECK(linfty_bound_check(u, a, sub, 2.5, 5.0, 3.0).branch ==
        BoundBranch::subcritical_superlinear);
  const ExponentContext super = ExponentContext::make(3.0, 2);
  const LinftyCheck prop4 = linfty_bound_check(u, a, super, 2.0, 5.0, 3.0);
  CHECK(prop4.branch == BoundBranch::supercritical);
  const double w = sobolev_norm(u, 3.0);
  CHECK(prop4.rhs == doctest::Approx(1.0 + w * w + std::pow(w, 10.0 / 7.0)).epsilon(1e-12));
}

TEST_CASE("cutoff divergence rates") {
  std::vector<double> cutoffs;
  for (int i = 0; i < 8; ++i) {
    cutoffs.push_back(3e-3 * std::pow(1e-4 / 3e-3, i / 7.0));
  }
  const RadialProfile p125 = RadialProfile::make(1.25, 2, 3.0);
  const CutoffRate divergent = cutoff_divergence_rate(p125, 4.0, cutoffs);
  CHECK(divergent.exponent == doctest::Approx(-1.0).epsilon(0.15));
  CHECK(!divergent.log_case);

  const RadialProfile p15 = RadialProfile::make(1.5, 2, 3.0);
  const CutoffRate logcase = cutoff_divergence_rate(p15, 4.0, cutoffs);
  CHECK(logcase.log_case);  // endpoint alpha: E grows like log(1/eps)

  const RadialProfile p13 = RadialProfile::make(1.3, 2, 3.0);
  const CutoffRate weighted = cutoff_divergence_rate(p13, 4.0, cutoffs, true);
  CHECK(std::abs(weighted.exponent) < 0.1);  // integrable weighted energy

  CHECK_THROWS_AS(cutoff_divergence_rate(p125, 4.0, {1e-3, 2e-3, 3e-3}),
                  std::invalid_argument);
}
