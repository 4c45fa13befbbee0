#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pkirch/exponents.hpp"

using namespace pkirch;

TEST_CASE("r_exponent substitutions") {
  CHECK(r_exponent(4.0, 3.0) == 8.0);
  CHECK(r_exponent(2.0, 7.0) == 2.0);  // limit case p = 2 gives r_s = 2 for all s
  CHECK(r_exponent(3.0, 2.0) == 4.0);
  CHECK_THROWS_AS(r_exponent(1.9, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(r_exponent(3.0, 1.0), std::invalid_argument);
}

TEST_CASE("r_exponent monotonicity and threshold") {
  for (double p : {2.1, 2.5, 3.0, 4.0}) {
    for (double s : {2.1, 3.0, 5.0, 9.0}) {
      CHECK(r_exponent(p + 0.1, s) > r_exponent(p, s));
      CHECK(r_exponent(p, s + 0.1) > r_exponent(p, s));
      // r_s - p = (s-1)(p-2), so r_s stays above p on the whole domain
      CHECK(r_exponent(p, s) > p);
      CHECK(r_exponent(p, s) - p == doctest::Approx((s - 1.0) * (p - 2.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("omega branches") {
  CHECK(omega(3.0, 4.0) == 0.0);
  CHECK(omega(2.5, 4.0) == 0.0);  // boundary p = 3 - 2/tau
  CHECK(omega(2.2, 10.0) == doctest::Approx(9.0).epsilon(1e-13));
  CHECK_THROWS_AS(omega(2.0, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(omega(3.0, 2.0), std::invalid_argument);
}

TEST_CASE("omega continuous at the branch boundary") {
  for (double tau : {3.0, 4.0, 10.0, 25.0}) {
    const double pb = 3.0 - 2.0 / tau;
    CHECK(omega(pb + 1e-12, tau) == 0.0);
    CHECK(omega(pb - 1e-9, tau) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(std::abs(omega(pb - 1e-9, tau)) < 1e-6);
  }
}

TEST_CASE("moser ladder rungs") {
  const ExponentContext ctx = ExponentContext::make(3.0, 4);
  CHECK(ctx.p_star == 12.0);
  CHECK(ctx.lambda == 4.0);

  const MoserLadder sup = moser_sequence(ctx, LadderVariant::superlinear, 8.0, 2);
  CHECK(sup.delta == 0.25);
  CHECK(sup.k[0] == 1.0);
  CHECK(sup.k[1] == 5.0);
  CHECK(sup.k[2] == 21.0);
  // alpha + k1 p + 1 = p*(1 + k0)
  CHECK(8.0 + sup.k[1] * 3.0 + 1.0 == 24.0);
  CHECK(ctx.p_star * (1.0 + sup.k[0]) == 24.0);

  const MoserLadder sub = moser_sequence(ctx, LadderVariant::sublinear, 1.5, 2);
  CHECK(sub.k[0] == 0.0);
  CHECK(sub.k[1] == 3.0);
  CHECK(sub.k[2] == 15.0);

  CHECK_THROWS_AS(moser_sequence(ctx, LadderVariant::superlinear, 1.5, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(moser_sequence(ctx, LadderVariant::sublinear, 2.5, 2),
                  std::invalid_argument);
  const ExponentContext super = ExponentContext::make(3.0, 2);  // p >= N
  CHECK(!super.critical_finite());
  CHECK_THROWS_AS(moser_sequence(super, LadderVariant::sublinear, 1.5, 2),
                  std::invalid_argument);
}

TEST_CASE("superlinear rung identity to machine precision") {
  std::mt19937_64 eng(42);
  auto uni = [&](double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(eng() >> 11) * 0x1.0p-53;
  };
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 3 + static_cast<int>(eng() % 5);
    const double p = uni(2.05, dim - 0.05);
    const ExponentContext ctx = ExponentContext::make(p, dim);
    const double alpha = uni(p - 1.0, ctx.p_star - 1.0 - 1e-6);
    const MoserLadder ladder = moser_sequence(ctx, LadderVariant::superlinear, alpha, 6);
    CHECK(std::abs(alpha + ladder.k[0] * p + 1.0 - ctx.p_star) <
          1e-12 * std::abs(ctx.p_star));
    for (int n = 1; n <= 6; ++n) {
      const double lhs = alpha + ladder.k[static_cast<size_t>(n)] * p + 1.0;
      const double rhs = ctx.p_star * (1.0 + ladder.k[static_cast<size_t>(n - 1)]);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
      CHECK(ladder.k[static_cast<size_t>(n)] > ladder.k[static_cast<size_t>(n - 1)]);
    }
  }
}

TEST_CASE("n_for_target") {
  const ExponentContext ctx = ExponentContext::make(3.0, 4);
  const MoserLadder sup = moser_sequence(ctx, LadderVariant::superlinear, 8.0, 2);
  CHECK(n_for_target(sup, ctx, 50.0) == 1);  // 24 < 50 <= 72
  CHECK(n_for_target(sup, ctx, 24.0) == 0);  // boundary, >= is inclusive
  const MoserLadder sub = moser_sequence(ctx, LadderVariant::sublinear, 1.5, 2);
  CHECK(n_for_target(sub, ctx, 100.0) == 2);  // 48 < 100 <= 192
  CHECK_THROWS_AS(n_for_target(sup, ctx, 1e300, 3), std::runtime_error);
}

TEST_CASE("h polynomials") {
  const ExponentContext ctx = ExponentContext::make(3.0, 4);
  CHECK(h_poly(ctx, 1, 0.0) == 0.0);
  CHECK(h_poly(ctx, 1, 1.0) == 2.0);
  CHECK(h_poly(ctx, 1, 2.0) == 258.0);
  CHECK_THROWS_AS(h_poly(ctx, 1, -0.5), std::invalid_argument);
  double prev = 0.0;
  for (double x = 0.0; x <= 3.0; x += 0.01) {
    const double v = h_poly(ctx, 2, x);
    CHECK(v >= x);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("iterative majorant values") {
  const AlgelMajorant a = algel_majorant(1.0, 1.0, 0.0, 1);
  CHECK(a.a_hat[1] == 2.0);
  CHECK(a.k[1] == 2.0);  // denominator 1 + 0 + 0^1
  const AlgelMajorant b = algel_majorant(1.0, 1.0, 1.0, 2);
  CHECK(b.a_hat[1] == 4.0);
  CHECK(b.a_hat[2] == 10.0);
  CHECK(b.overflow_index == -1);
  const AlgelMajorant c = algel_majorant(10.0, 8.0, 50.0, 400);
  CHECK(c.overflow_index > 0);
  CHECK(std::isinf(c.a_hat.back()));
}

TEST_CASE("majorant dominates random admissible sequences") {
  std::mt19937_64 eng(7);
  auto uni = [&](double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(eng() >> 11) * 0x1.0p-53;
  };
  for (int trial = 0; trial < 100; ++trial) {
    const double C = uni(0.5, 3.0);
    const double kappa = uni(0.2, 2.5);
    const double A0 = uni(0.0, 4.0);
    const int n = 12;
    const AlgelMajorant maj = algel_majorant(C, kappa, A0, n);
    // simulate A_m <= C(1 + A_{m-1} + A_{m-1}^{d_m}) with d_m increasing to kappa
    double A = A0;
    for (int m = 1; m <= n; ++m) {
      const double d = kappa * (1.0 - std::pow(0.5, m) * uni(0.0, 1.0));
      const double bound = C * (1.0 + A + std::pow(A, d));
      A = uni(0.0, 1.0) * bound;  // any admissible next value
      CHECK(A <= maj.a_hat[static_cast<size_t>(m)] * (1.0 + 1e-12));
      CHECK(maj.a_hat[static_cast<size_t>(m)] <=
            maj.k[static_cast<size_t>(m)] *
                (1.0 + A0 + std::pow(A0, static_cast<double>(m) * kappa)) *
                (1.0 + 1e-12));
    }
  }
}

TEST_CASE("bound formula composite exponents") {
  const ExponentContext ctx = ExponentContext::make(3.0, 4);
  const BoundFormula bf = bound_formula(ctx, 2.0, 5.0, 3.0);
  CHECK(bf.q == 10.0);
  CHECK(bf.r_R == 7.0);
  CHECK(bf.r_s == 5.0);
  CHECK(bf.R_s == 4.0);  // max{4, 20/7, 12/5, 12/7}
  CHECK(bf.T_s == 0.0);  // omegas vanish for p = 3
  CHECK_THROWS_AS(bound_formula(ctx, 2.0, 2.0, 3.0), std::invalid_argument);

  const ExponentContext wide = ExponentContext::make(2.2, 10);
  const BoundFormula bf2 = bound_formula(wide, 1.1, 31.0, 3.0);
  const double omega_hand = 27.36 / 1.64;  // (31*0.8 - 2)(1.2) / ((31*0.2 + 2)(0.2))
  CHECK(bf2.omega_pR == doctest::Approx(omega_hand).epsilon(1e-12));
  CHECK(bf2.T_s == doctest::Approx(bf2.omega_ps + 1.1 * bf2.omega_pR *
                                                      (bf2.r_s + 3.0) / bf2.r_s)
                       .epsilon(1e-14));
  CHECK_THROWS_AS(bound_formula(wide, 1.1, 29.9, 3.0), std::invalid_argument);
}

TEST_CASE("infinity sentinel") {
  const ExponentContext ctx = ExponentContext::make(3.0, 2);
  CHECK(std::isinf(ctx.p_star));
  CHECK(std::isinf(ctx.lambda));
  CHECK(!ctx.critical_finite());
  CHECK_THROWS_AS(ExponentContext::make(2.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(ExponentContext::make(3.0, 1), std::invalid_argument);
}
