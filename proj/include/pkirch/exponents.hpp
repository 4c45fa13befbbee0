#ifndef PKIRCH_EXPONENTS_HPP
#define PKIRCH_EXPONENTS_HPP

#include <cmath>
#include <limits>
#include <vector>

namespace pkirch {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Sobolev-critical exponent data for a pair (p, N) with p > 2, N >= 2.
/// p_star = Np/(N-p) and lambda = p_star/p when p < N; both are an explicit
/// +inf sentinel otherwise, and consumers must branch on critical_finite().
struct ExponentContext {
  double p = 0.0;
  int dim = 0;
  double p_star = kInf;
  double lambda = kInf;

  static ExponentContext make(double p, int dim);
  bool critical_finite() const { return std::isfinite(p_star); }
};

/// r_s = s(p-2) + 2, the basic regularity exponent.  Requires p >= 2, s >= 2.
double r_exponent(double p, double s);

/// omega_{p,tau}: 0 when p >= 3 - 2/tau, otherwise
/// (tau(3-p)-2)(p-1) / ((tau(p-2)+2)(p-2)).  Requires p > 2, tau > 2.
double omega(double p, double tau);

enum class LadderVariant { superlinear, sublinear };

/// Iteration ladder k_0, k_1, ... used by the L^s bootstrap.
///   superlinear (alpha >= p-1): k_n = delta * sum_{i=1..n+1} lambda^i,
///     with delta = 1 - (alpha+1)/p_star;
///   sublinear (1 <= alpha < p-1): k_n = lambda^n - 1.
struct MoserLadder {
  LadderVariant variant = LadderVariant::superlinear;
  double alpha = 0.0;
  double delta = 0.0;  // superlinear only
  double lambda = 0.0;
  double p_star = 0.0;
  double p = 0.0;
  std::vector<double> k;  // k_0 .. k_{n_max}

  /// k_n, recomputed from the ladder parameters for any n >= 0.
  double rung(int n) const;
};

MoserLadder moser_sequence(const ExponentContext& ctx, LadderVariant variant,
                           double alpha, int n_max);

/// Smallest rung index n with p_star * (k_n + 1) >= s.  Iteration is capped
/// (default 10^4 rungs) and throws if the cap is hit.
int n_for_target(const MoserLadder& ladder, const ExponentContext& ctx, double s,
                 int rung_cap = 10000);

/// h_s(x) = x + x^((n_s+1)*lambda) for x >= 0.
double h_poly(const ExponentContext& ctx, int n_s, double x);

/// Explicit majorant for the iterative lemma A_n <= C(1 + A_{n-1} + A_{n-1}^{d}),
/// d <= kappa: A_hat_0 = A0, A_hat_m = C(2 + A_hat_{m-1} + A_hat_{m-1}^kappa),
/// using A^d <= 1 + A^kappa.  K_m = A_hat_m / (1 + A0 + A0^(m*kappa)).
/// Overflow is reported through the +inf sentinel and overflow_index.
struct AlgelMajorant {
  std::vector<double> a_hat;  // A_hat_0 .. A_hat_n
  std::vector<double> k;      // K_0 .. K_n
  int overflow_index = -1;    // first index where A_hat overflowed, or -1
};

AlgelMajorant algel_majorant(double C, double kappa, double A0, int n);

/// Composite exponents of the L-infinity bounds: q = alpha*R, r_R, r_s,
/// omega_{p,R}, omega_{p,s}, and
///   R_s = max{alpha^2, alpha q / r_R, alpha^2 s / r_s, alpha q s / (r_R r_s)},
///   T_s = omega_{p,s} + alpha omega_{p,R} (r_s + s) / r_s.
struct BoundFormula {
  double R = 0.0;
  double q = 0.0;
  double r_R = 0.0;
  double r_s = 0.0;
  double omega_pR = 0.0;
  double omega_ps = 0.0;
  double R_s = 0.0;
  double T_s = 0.0;
};

/// Requires R > max{2, (N-4)/(p-2)} and s > 2.
BoundFormula bound_formula(const ExponentContext& ctx, double alpha, double R, double s);

}  // namespace pkirch

#endif  // PKIRCH_EXPONENTS_HPP
