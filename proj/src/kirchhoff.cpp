#include "pkirch/kirchhoff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pkirch/fracnorm.hpp"
#include "pkirch/quadrature.hpp"

namespace pkirch {

double Nonlinearity::eval_F(double gx, double t) const {
  if (F) {
    return F(gx, t);
  }
  if (t == 0.0) {
    return 0.0;
  }
  return adaptive_simpson([this, gx](double tau) { return f(gx, tau); }, 0.0, t, quad_tol);
}

ScalarField Nonlinearity::f_field(const ScalarField& v) const {
  ScalarField out(v.grid);
  for (int i = 0; i < v.size(); ++i) {
    out[i] = f(g[i], v[i]);
  }
  out.check_finite("Nonlinearity::f_field");
  return out;
}

void Nonlinearity::validate_growth(double t_max, int samples) const {
  const double g_lo = g.min();
  const double g_hi = g.max();
  for (int xi = 0; xi <= 8; ++xi) {
    const double gx = g_lo + (g_hi - g_lo) * xi / 8.0;
    for (int i = -samples; i <= samples; ++i) {
      const double t = t_max * i / samples;
      const double bound = c1 * (std::pow(std::abs(t), alpha) + 1.0);
      if (!(std::abs(f(gx, t)) <= bound * (1.0 + 1e-9) + 1e-12)) {
        throw std::runtime_error("Nonlinearity " + id + ": growth bound violated at t = " +
                                 std::to_string(t));
      }
    }
  }
}

Nonlinearity nonlinearity_example1(double beta, double c, ScalarField g, double nu) {
  if (!(beta > 1.0)) {
    throw std::invalid_argument("nonlinearity_example1: requires beta > 1");
  }
  if (!(c > 0.0) || !(nu > 0.0)) {
    throw std::invalid_argument("nonlinearity_example1: requires c > 0 and nu > 0");
  }
  g.check_finite("nonlinearity_example1 g");
  if (!(g.max() > g.min())) {
    throw std::invalid_argument("nonlinearity_example1: g must be nonconstant");
  }
  Nonlinearity nl;
  nl.id = "example1";
  nl.g = std::move(g);
  nl.f = [c, beta](double gx, double t) {
    return -c * t * std::pow(t * t + 1.0, 0.5 * (beta - 2.0)) + gx;
  };
  // primitive with F(x,0) = 0 (integrating f directly; the crude closed form
  // with constant 2^{beta/2}/beta bounds would not vanish at t = 0)
  nl.F = [c, beta](double gx, double t) {
    return -(c / beta) * (std::pow(t * t + 1.0, 0.5 * beta) - 1.0) + t * gx;
  };
  const double g_abs = std::max(std::abs(nl.g.min()), std::abs(nl.g.max()));
  nl.alpha = std::max(1.0, beta - 1.0);
  nl.c1 = (beta >= 2.0 ? c * std::pow(2.0, 0.5 * beta) : c) + g_abs;
  nl.beta = beta;
  nl.c3 = c / beta;  // the sharp limsup of |F|/|t|^beta
  nl.h3_prime = false;
  nl.nu = nu;
  nl.sigma = beta;
  nl.c2 = c * (beta - nu) / beta;
  return nl;
}

Nonlinearity nonlinearity_example2(double p, double eps_exp, ScalarField g, double theta) {
  if (!(p > 2.0)) {
    throw std::invalid_argument("nonlinearity_example2: requires p > 2");
  }
  if (!(eps_exp > 0.0) || !(eps_exp < p - 2.0)) {
    throw std::invalid_argument("nonlinearity_example2: requires 0 < eps < p - 2");
  }
  if (!(theta > 0.0)) {
    throw std::invalid_argument("nonlinearity_example2: requires theta > 0");
  }
  g.check_finite("nonlinearity_example2 g");
  if (!(g.min() > 0.0)) {
    throw std::invalid_argument("nonlinearity_example2: requires g >= g0 > 0");
  }
  if (!(g.max() > g.min())) {
    throw std::invalid_argument("nonlinearity_example2: g must be nonconstant");
  }
  Nonlinearity nl;
  nl.id = "example2";
  nl.g = std::move(g);
  const double e = eps_exp;
  nl.f = [p, e](double gx, double t) {
    if (t == 0.0) {
      return 0.0;
    }
    const double at = std::abs(t);
    const double S = std::pow(at, e) / e;
    const double s1 = std::sin(S);
    return -gx * t *
           ((p - 2.0) * (p - e) * std::pow(at, p - e - 2.0) * s1 * s1 +
            (p + (p - 2.0) * std::sin(2.0 * S)) * std::pow(at, p - 2.0));
  };
  nl.F = [p, e](double gx, double t) {
    if (t == 0.0) {
      return 0.0;
    }
    const double at = std::abs(t);
    const double S = std::pow(at, e) / e;
    const double s1 = std::sin(S);
    return -gx * (std::pow(at, p) + (p - 2.0) * std::pow(at, p - e) * s1 * s1);
  };
  const double g0 = nl.g.min();
  const double g_hi = nl.g.max();
  nl.alpha = p - 1.0;
  nl.c1 = g_hi * ((p - 2.0) * (p - e) + 2.0 * p - 2.0);
  nl.beta = std::max(1.0, p - e - 0.5);
  nl.c3 = 0.0;
  nl.h3_prime = true;
  nl.nu = 2.0 / (1.0 + 2.0 * theta);
  nl.sigma = p;
  nl.c2 = (2.0 - nl.nu) * g0;  // sharp tail constant; equals 2 nu theta g0
  return nl;
}

std::pair<KirchhoffTerm, Nonlinearity> catalog_example1(double beta, double c,
                                                        double theta1, double theta2,
                                                        ScalarField g, double nu) {
  return {KirchhoffTerm::example1_log(theta1, theta2),
          nonlinearity_example1(beta, c, std::move(g), nu)};
}

std::pair<KirchhoffTerm, Nonlinearity> catalog_example2(double p, double eps_exp,
                                                        double delta1, double delta2,
                                                        ScalarField g, double theta) {
  return {KirchhoffTerm::example2_oscillating(delta1, delta2),
          nonlinearity_example2(p, eps_exp, std::move(g), theta)};
}

Nonlinearity nonlinearity_source(ScalarField g) {
  g.check_finite("nonlinearity_source g");
  Nonlinearity nl;
  nl.id = "source";
  nl.g = std::move(g);
  nl.f = [](double gx, double) { return gx; };
  nl.F = [](double gx, double t) { return t * gx; };
  nl.alpha = 1.0;
  nl.c1 = std::max(std::abs(nl.g.min()), std::abs(nl.g.max()));
  return nl;
}

namespace {

double problem_eps(const NonlocalProblem& prob) {
  return prob.eps < 0.0 ? 1e-6 * prob.f.g.grid->diameter() : prob.eps;
}

}  // namespace

ScalarField nonlocal_residual_field(const ScalarField& u, const NonlocalProblem& prob) {
  const double b = b_of(u, prob.a, prob.p);
  LocalProblem lp;
  lp.p = prob.p;
  lp.k = std::pow(b, 1.0 / (prob.p - 2.0));
  lp.g = prob.f.f_field(u);
  lp.eps = std::min(problem_eps(prob), 1e-2);
  return residual_field(u, lp);
}

double nonlocal_residual(const ScalarField& u, const NonlocalProblem& prob) {
  const ScalarField r = nonlocal_residual_field(u, prob);
  double s = 0.0;
  for (int i = 0; i < r.size(); ++i) {
    s += u.grid->node_volume(i) * r[i] * r[i];
  }
  return std::sqrt(s);
}

FixedPointReport fixed_point_solve(const NonlocalProblem& prob,
                                   const FixedPointOptions& opts) {
  if (opts.schedule.empty() || opts.schedule.back() > 1.0) {
    throw std::invalid_argument("fixed_point_solve: schedule must end at t <= 1");
  }
  if (!(opts.damping > 0.0) || !(opts.damping <= 1.0)) {
    throw std::invalid_argument("fixed_point_solve: damping must lie in (0, 1]");
  }
  const GridPtr grid = prob.f.g.grid;
  const double eps = problem_eps(prob);

  FixedPointReport rep;
  rep.schedule = opts.schedule;
  rep.u = ScalarField(grid, 0.0);
  double theta = opts.damping;
  int flips = 0;

  for (size_t stage = 0; stage < opts.schedule.size(); ++stage) {
    const double t = opts.schedule[stage];
    const bool final_stage = stage + 1 == opts.schedule.size();
    const double stage_tol = final_stage ? opts.tol_outer : opts.tol_outer * opts.stage_slack;
    if (t == 0.0) {
      rep.u = ScalarField(grid, 0.0);  // T_0 is identically zero
      rep.t_history.push_back(0.0);
      rep.b_history.push_back(b_of(rep.u, prob.a, prob.p));
      rep.succ_diff.push_back(0.0);
      rep.theta_history.push_back(theta);
      continue;
    }
    bool stage_done = false;
    while (!stage_done && rep.outer_iterations < opts.max_outer) {
      const double b = b_of(rep.u, prob.a, prob.p);
      const ScalarField rhs = prob.f.f_field(rep.u);
      const SolveReport inner =
          solve_linearized_b(b, t, rhs, prob.p, eps, opts.tol_inner, &rep.u);
      ScalarField next(grid);
      for (int i = 0; i < next.size(); ++i) {
        next[i] = (1.0 - theta) * rep.u[i] + theta * inner.u[i];
      }
      ScalarField diff(grid);
      for (int i = 0; i < diff.size(); ++i) {
        diff[i] = next[i] - rep.u[i];
      }
      const double step = sobolev_norm(diff, prob.p);
      rep.u = next;
      ++rep.outer_iterations;
      rep.t_history.push_back(t);
      rep.b_history.push_back(b);
      rep.succ_diff.push_back(step);
      rep.theta_history.push_back(theta);

      const size_t m = rep.b_history.size();
      if (m >= 3 && rep.t_history[m - 2] == t && rep.t_history[m - 3] == t) {
        const double d1 = rep.b_history[m - 1] - rep.b_history[m - 2];
        const double d2 = rep.b_history[m - 2] - rep.b_history[m - 3];
        if (d1 * d2 < 0.0) {
          if (++flips >= 2) {
            theta = std::max(theta * 0.5, 1.0 / 64.0);
            flips = 0;
          }
        } else {
          flips = 0;
        }
      }

      if (sobolev_norm(rep.u, prob.p) > opts.blowup) {
        rep.diverged = true;
        rep.residual = kInf;
        return rep;
      }
      stage_done = step <= stage_tol;
    }
    if (!stage_done) {
      break;  // outer budget exhausted
    }
  }

  rep.final_theta = theta;
  const double t_last = opts.schedule.back();
  if (t_last == 0.0) {
    rep.residual = 0.0;
    rep.converged = true;
    return rep;
  }
  {
    const double b = b_of(rep.u, prob.a, prob.p);
    LocalProblem lp;
    lp.p = prob.p;
    lp.k = std::pow(b, 1.0 / (prob.p - 2.0));
    lp.g = prob.f.f_field(rep.u);
    for (int i = 0; i < lp.g.size(); ++i) {
      lp.g[i] *= t_last;
    }
    lp.eps = std::min(eps, 1e-2);
    rep.residual = residual_l2(rep.u, lp);
  }
  rep.converged = !rep.diverged && !rep.succ_diff.empty() &&
                  rep.succ_diff.back() <= opts.tol_outer && rep.residual <= opts.tol_res;
  return rep;
}

NqCertificate nq_certificate(const Nonlinearity& nl, const NqSearch& search) {
  if (!(nl.nu > 0.0) || nl.sigma == 0.0) {
    throw std::invalid_argument("nq_certificate: nonlinearity carries no NQ data");
  }
  NqCertificate cert;
  if (!nl.h3_prime) {
    if (!(nl.c3 > 0.0) || !(nl.beta > 0.0)) {
      throw std::invalid_argument("nq_certificate: H3 route needs beta and c3");
    }
    if (nl.nu * nl.c3 >= nl.c2) {
      cert.status = NqStatus::precondition_violated;
      cert.note = "nu*c3 = " + std::to_string(nl.nu * nl.c3) +
                  " >= c2 = " + std::to_string(nl.c2);
      return cert;
    }
    cert.eps = 0.25 * (nl.c2 - nl.nu * nl.c3);
    cert.delta = 0.25 * (nl.c2 - nl.nu * nl.c3) / nl.nu;
  } else {
    cert.eps = 0.5 * nl.c2;
    cert.delta = 0.5 * nl.c2 / nl.nu;
  }

  // coefficient samples: quantiles of the nodal datum
  std::vector<double> gs = nl.g.v;
  std::sort(gs.begin(), gs.end());
  std::vector<double> gq;
  const int nx = std::max(2, search.x_samples);
  for (int i = 0; i < nx; ++i) {
    gq.push_back(gs[static_cast<size_t>(std::lround(
        static_cast<double>(i) * (gs.size() - 1) / (nx - 1)))]);
  }

  const int m = std::max(16, search.t_samples);
  const double t0 = std::max(search.r_start, 1.0);
  if (!(search.t_max > t0)) {
    throw std::invalid_argument("nq_certificate: t_max must exceed the search start");
  }
  auto t_at = [&](int i) {
    return t0 + (search.t_max - t0) * static_cast<double>(i) / (m - 1);
  };

  auto tail_ok = [&](double at, double* quot_min) {
    bool ok = true;
    for (double sgn : {1.0, -1.0}) {
      const double t = sgn * at;
      const double ts = std::pow(at, nl.sigma);
      const double tb = std::pow(at, nl.beta);
      // x-independent sign condition of the combined tail estimate
      if (!nl.h3_prime) {
        if ((-nl.c2 + cert.eps) * ts + nl.nu * (nl.c3 + cert.delta) * tb > 1e-12) {
          ok = false;
        }
      } else {
        if ((-nl.c2 + cert.eps) * ts - nl.nu * cert.delta * tb > 1e-12) {
          ok = false;
        }
      }
      for (double gx : gq) {
        const double fv = nl.eval_f(gx, t);
        const double Fv = nl.eval_F(gx, t);
        const double quot = -(fv * t - nl.nu * Fv) / ts;
        if (quot_min != nullptr) {
          *quot_min = std::min(*quot_min, quot);
        }
        if (quot < nl.c2 - cert.eps) {
          ok = false;
        }
        if (!nl.h3_prime) {
          if (Fv > (nl.c3 + cert.delta) * tb) {
            ok = false;
          }
        } else {
          if (-Fv < cert.delta * tb) {
            ok = false;
          }
        }
        if (fv * t > 1e-12) {
          ok = false;
        }
      }
    }
    return ok;
  };

  int first_good = -1;
  for (int i = m - 1; i >= 0; --i) {
    if (tail_ok(t_at(i), nullptr)) {
      first_good = i;
    } else {
      break;
    }
  }
  if (first_good < 0) {
    cert.status = NqStatus::not_found;
    cert.note = "no admissible tail threshold up to t_max = " + std::to_string(search.t_max);
    return cert;
  }
  cert.R = std::max(1.0, t_at(first_good));
  double quot_min = kInf;
  for (int i = first_good; i < m; ++i) {
    tail_ok(t_at(i), &quot_min);
  }
  cert.empirical_c2 = quot_min;
  cert.margin = quot_min - (nl.c2 - cert.eps);

  double f_max = 0.0;
  const int mc = 2000;
  for (int i = 0; i <= mc; ++i) {
    const double t = cert.R * (2.0 * i - mc) / mc;
    for (double gx : gq) {
      f_max = std::max(f_max, std::abs(nl.eval_f(gx, t)));
    }
  }
  cert.K = f_max * cert.R * nl.g.grid->measure();
  cert.status = NqStatus::ok;
  return cert;
}

}  // namespace pkirch
