#ifndef PKIRCH_QUADRATURE_HPP
#define PKIRCH_QUADRATURE_HPP

#include <functional>
#include <stdexcept>
#include <string>

namespace pkirch {

struct QuadratureError : std::runtime_error {
  double worst_lo, worst_hi, worst_err;
  QuadratureError(const std::string& msg, double lo, double hi, double err)
      : std::runtime_error(msg), worst_lo(lo), worst_hi(hi), worst_err(err) {}
};

/// Adaptive Simpson on [a, b] by interval bisection; throws QuadratureError
/// carrying the worst subinterval when the depth cap is hit before the local
/// error estimate falls under the budget.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 48);

}  // namespace pkirch

#endif  // PKIRCH_QUADRATURE_HPP
