#include "pkirch/quadrature.hpp"

#include <cmath>

namespace pkirch {

namespace {

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double recurse(const std::function<double(double)>& f, double a, double b, double fa,
               double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double err = (left + right - whole) / 15.0;
  if (std::abs(err) <= tol || (b - a) < 1e-14 * (std::abs(a) + std::abs(b))) {
    return left + right + err;
  }
  if (depth <= 0) {
    throw QuadratureError("adaptive_simpson: depth cap hit on [" + std::to_string(a) +
                              ", " + std::to_string(b) + "], err " + std::to_string(err),
                          a, b, std::abs(err));
  }
  return recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
  if (a == b) {
    return 0.0;
  }
  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = simpson(fa, fm, fb, b - a);
  return recurse(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace pkirch
