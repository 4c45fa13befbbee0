#include "pkirch/exponents.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pkirch {

ExponentContext ExponentContext::make(double p, int dim) {
  if (!(p > 2.0)) {
    throw std::invalid_argument("ExponentContext: p must be > 2, got " + std::to_string(p));
  }
  if (dim < 2) {
    throw std::invalid_argument("ExponentContext: N must be >= 2, got " + std::to_string(dim));
  }
  ExponentContext ctx;
  ctx.p = p;
  ctx.dim = dim;
  if (p < static_cast<double>(dim)) {
    ctx.p_star = static_cast<double>(dim) * p / (static_cast<double>(dim) - p);
    ctx.lambda = ctx.p_star / p;
  } else {
    ctx.p_star = kInf;
    ctx.lambda = kInf;
  }
  return ctx;
}

double r_exponent(double p, double s) {
  if (!(p >= 2.0) || !(s >= 2.0)) {
    throw std::invalid_argument("r_exponent: requires p >= 2 and s >= 2");
  }
  return s * (p - 2.0) + 2.0;
}

double omega(double p, double tau) {
  if (!(p > 2.0) || !(tau > 2.0)) {
    throw std::invalid_argument("omega: requires p > 2 and tau > 2");
  }
  if (p >= 3.0 - 2.0 / tau) {
    return 0.0;
  }
  return (tau * (3.0 - p) - 2.0) * (p - 1.0) / ((tau * (p - 2.0) + 2.0) * (p - 2.0));
}

double MoserLadder::rung(int n) const {
  if (n < 0) {
    throw std::invalid_argument("MoserLadder::rung: n must be >= 0");
  }
  if (n < static_cast<int>(k.size())) {
    return k[static_cast<size_t>(n)];
  }
  if (variant == LadderVariant::sublinear) {
    return std::pow(lambda, n) - 1.0;
  }
  double sum = 0.0;
  double pw = 1.0;
  for (int i = 1; i <= n + 1; ++i) {
    pw *= lambda;
    sum += pw;
  }
  return delta * sum;
}

MoserLadder moser_sequence(const ExponentContext& ctx, LadderVariant variant,
                           double alpha, int n_max) {
  if (!ctx.critical_finite()) {
    throw std::invalid_argument("moser_sequence: requires lambda finite (p < N)");
  }
  if (n_max < 0) {
    throw std::invalid_argument("moser_sequence: n_max must be >= 0");
  }
  MoserLadder ladder;
  ladder.variant = variant;
  ladder.alpha = alpha;
  ladder.lambda = ctx.lambda;
  ladder.p_star = ctx.p_star;
  ladder.p = ctx.p;
  if (variant == LadderVariant::superlinear) {
    if (!(alpha >= ctx.p - 1.0) || !(alpha < ctx.p_star - 1.0)) {
      throw std::invalid_argument("moser_sequence: superlinear requires p-1 <= alpha < p*-1");
    }
    ladder.delta = 1.0 - (alpha + 1.0) / ctx.p_star;
  } else {
    if (!(alpha >= 1.0) || !(alpha < ctx.p - 1.0)) {
      throw std::invalid_argument("moser_sequence: sublinear requires 1 <= alpha < p-1");
    }
    ladder.delta = 0.0;
  }
  ladder.k.reserve(static_cast<size_t>(n_max) + 1);
  if (variant == LadderVariant::superlinear) {
    double sum = 0.0;
    double pw = 1.0;
    for (int n = 0; n <= n_max; ++n) {
      pw *= ctx.lambda;  // lambda^(n+1)
      sum += pw;
      ladder.k.push_back(ladder.delta * sum);
    }
  } else {
    double pw = 1.0;  // lambda^n
    for (int n = 0; n <= n_max; ++n) {
      ladder.k.push_back(pw - 1.0);
      pw *= ctx.lambda;
    }
  }
  return ladder;
}

int n_for_target(const MoserLadder& ladder, const ExponentContext& ctx, double s,
                 int rung_cap) {
  if (!(s > 2.0)) {
    throw std::invalid_argument("n_for_target: requires s > 2");
  }
  if (!ctx.critical_finite()) {
    throw std::invalid_argument("n_for_target: requires lambda finite (p < N)");
  }
  for (int n = 0; n <= rung_cap; ++n) {
    if (ctx.p_star * (ladder.rung(n) + 1.0) >= s) {
      return n;
    }
  }
  throw std::runtime_error("n_for_target: no rung reaches s within " +
                           std::to_string(rung_cap) + " rungs (unbounded ladder?)");
}

double h_poly(const ExponentContext& ctx, int n_s, double x) {
  if (x < 0.0) {
    throw std::invalid_argument("h_poly: requires x >= 0");
  }
  if (!ctx.critical_finite()) {
    throw std::invalid_argument("h_poly: requires lambda finite (p < N)");
  }
  return x + std::pow(x, (static_cast<double>(n_s) + 1.0) * ctx.lambda);
}

AlgelMajorant algel_majorant(double C, double kappa, double A0, int n) {
  if (!(C > 0.0) || !(kappa >= 0.0) || !(A0 >= 0.0) || n < 0) {
    throw std::invalid_argument("algel_majorant: requires C > 0, kappa >= 0, A0 >= 0, n >= 0");
  }
  AlgelMajorant out;
  out.a_hat.resize(static_cast<size_t>(n) + 1);
  out.k.resize(static_cast<size_t>(n) + 1);
  out.a_hat[0] = A0;
  for (int m = 1; m <= n; ++m) {
    const double prev = out.a_hat[static_cast<size_t>(m - 1)];
    double next = std::isinf(prev) ? kInf : C * (2.0 + prev + std::pow(prev, kappa));
    if (!std::isfinite(next)) {
      next = kInf;
      if (out.overflow_index < 0) {
        out.overflow_index = m;
      }
    }
    out.a_hat[static_cast<size_t>(m)] = next;
  }
  for (int m = 0; m <= n; ++m) {
    const double denom = 1.0 + A0 + std::pow(A0, static_cast<double>(m) * kappa);
    out.k[static_cast<size_t>(m)] = out.a_hat[static_cast<size_t>(m)] / denom;
  }
  return out;
}

BoundFormula bound_formula(const ExponentContext& ctx, double alpha, double R, double s) {
  const double floor_R =
      std::max(2.0, (static_cast<double>(ctx.dim) - 4.0) / (ctx.p - 2.0));
  if (!(R > floor_R)) {
    throw std::invalid_argument("bound_formula: requires R > max{2, (N-4)/(p-2)} = " +
                                std::to_string(floor_R));
  }
  if (!(s > 2.0)) {
    throw std::invalid_argument("bound_formula: requires s > 2");
  }
  BoundFormula b;
  b.R = R;
  b.q = alpha * R;
  b.r_R = r_exponent(ctx.p, R);
  b.r_s = r_exponent(ctx.p, s);
  b.omega_pR = omega(ctx.p, R);
  b.omega_ps = omega(ctx.p, s);
  b.R_s = std::max({alpha * alpha, alpha * b.q / b.r_R, alpha * alpha * s / b.r_s,
                    alpha * b.q * s / (b.r_R * b.r_s)});
  b.T_s = b.omega_ps + alpha * b.omega_pR * (b.r_s + s) / b.r_s;
  return b;
}

}  // namespace pkirch
