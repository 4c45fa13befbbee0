#include "pkirch/kirchhoff_term.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pkirch {

KirchhoffTerm KirchhoffTerm::constant(double value) {
  if (!(value > 0.0)) {
    throw std::invalid_argument("KirchhoffTerm::constant: value must be > 0");
  }
  return KirchhoffTerm("constant", value, [value](double) { return value; });
}

KirchhoffTerm KirchhoffTerm::example1_log(double theta1, double theta2) {
  if (!(theta1 > 0.0) || !(theta2 > 0.0)) {
    throw std::invalid_argument("KirchhoffTerm::example1_log: thetas must be > 0");
  }
  return KirchhoffTerm("example1-log", theta2, [theta1, theta2](double t) {
    return theta1 * std::log1p(std::abs(t)) + theta2;
  });
}

KirchhoffTerm KirchhoffTerm::example2_oscillating(double delta1, double delta2) {
  if (!(delta1 > 0.0) || !(delta2 > 0.0)) {
    throw std::invalid_argument("KirchhoffTerm::example2_oscillating: deltas must be > 0");
  }
  auto eval = [delta1, delta2](double t) {
    t = std::abs(t);
    if (t == 0.0) {
      return delta1 + delta2;
    }
    double s = t - std::floor(t);  // periodic extension of (0,1]
    if (s == 0.0) {
      s = 1.0;
    }
    return delta1 * std::abs(s * std::sin(1.0 / s)) + delta2;
  };
  return KirchhoffTerm("example2-oscillating", delta2, eval);
}

KirchhoffTerm KirchhoffTerm::tabulated(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("KirchhoffTerm::tabulated: need at least 2 samples");
  }
  double a0 = samples.front().second;
  for (size_t i = 0; i < samples.size(); ++i) {
    if (i > 0 && !(samples[i].first > samples[i - 1].first)) {
      throw std::invalid_argument("KirchhoffTerm::tabulated: abscissae must increase");
    }
    if (!(samples[i].second > 0.0)) {
      throw std::invalid_argument("KirchhoffTerm::tabulated: values must be > 0");
    }
    a0 = std::min(a0, samples[i].second);
  }
  auto eval = [table = std::move(samples)](double t) {
    if (t <= table.front().first) return table.front().second;
    if (t >= table.back().first) return table.back().second;
    auto it = std::upper_bound(table.begin(), table.end(), t,
                               [](double v, const auto& s) { return v < s.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (t - lo.first) / (hi.first - lo.first);
    return (1.0 - w) * lo.second + w * hi.second;
  };
  return KirchhoffTerm("tabulated", a0, eval);
}

void KirchhoffTerm::validate(double t_max, int samples) const {
  for (int i = 0; i <= samples; ++i) {
    const double t = t_max * i / samples;
    if (!(eval_(t) >= a0_ - 1e-12)) {
      throw std::runtime_error("KirchhoffTerm: a(t) < a0 at t = " + std::to_string(t));
    }
  }
}

}  // namespace pkirch
