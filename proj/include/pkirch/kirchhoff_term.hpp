#ifndef PKIRCH_KIRCHHOFF_TERM_HPP
#define PKIRCH_KIRCHHOFF_TERM_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pkirch/grid.hpp"

namespace pkirch {

/// Nonlocal coefficient a(.) with its lower bound a0 > 0.  Catalog entries or
/// a tabulated sample list with linear interpolation.
class KirchhoffTerm {
 public:
  static KirchhoffTerm constant(double value);
  /// a(t) = theta1 ln(1 + |t|) + theta2.
  static KirchhoffTerm example1_log(double theta1, double theta2);
  /// a(t) = delta1 |t sin(1/t)| + delta2 on (0,1], a(0) = delta1 + delta2,
  /// extended periodically beyond (0,1].
  static KirchhoffTerm example2_oscillating(double delta1, double delta2);
  static KirchhoffTerm tabulated(std::vector<std::pair<double, double>> samples);

  double operator()(double t) const { return eval_(t); }
  double lower_bound() const { return a0_; }
  const std::string& id() const { return id_; }

  /// Dense sampling check of a(t) >= a0 on [0, t_max]; throws on violation.
  void validate(double t_max, int samples = 4096) const;

 private:
  KirchhoffTerm(std::string id, double a0, std::function<double(double)> eval)
      : id_(std::move(id)), a0_(a0), eval_(std::move(eval)) {}
  std::string id_;
  double a0_ = 0.0;
  std::function<double(double)> eval_;
};

/// b(v) = a(||v||^p_{W^{1,p}})^{p-1}, the effective flux multiplier;
/// b(v) >= a0^{p-1} always.
double b_of(const ScalarField& v, const KirchhoffTerm& a, double p);

}  // namespace pkirch

#endif  // PKIRCH_KIRCHHOFF_TERM_HPP
