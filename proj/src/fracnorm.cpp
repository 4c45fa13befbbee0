#include "pkirch/fracnorm.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace pkirch {

namespace {

double field_pow_integral(const ScalarField& u, double s) {
  double acc = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    acc += u.grid->node_volume(i) * std::pow(std::abs(u[i]), s);
  }
  return acc;
}

std::vector<int> shift_cells(const ShiftSet& set, double extent, double cell) {
  if (set.count <= 0 || !(set.max_fraction > 0.0)) {
    throw std::invalid_argument("nikolskii_seminorm: empty shift set");
  }
  const int max_c = static_cast<int>(std::floor(set.max_fraction * extent / cell + 1e-9));
  if (max_c < 1) {
    throw std::invalid_argument("nikolskii_seminorm: shift set empty at this resolution");
  }
  const int min_c = std::max(1, static_cast<int>(std::round(set.min_fraction * extent / cell)));
  std::set<int> cells;
  for (int k = 0; k < set.count; ++k) {
    const double f = set.count == 1 ? 1.0 : static_cast<double>(k) / (set.count - 1);
    const double c = min_c * std::pow(static_cast<double>(max_c) / min_c, f);
    cells.insert(std::max(min_c, std::min(max_c, static_cast<int>(std::lround(c)))));
  }
  cells.insert(max_c);
  return {cells.begin(), cells.end()};
}

struct UniformRadial {
  std::vector<double> r;       // uniform nodes on [r_min, 1]
  std::vector<double> du;      // resampled radial derivative
  double step = 0.0;
  double weight_const = 0.0;   // omega_N
  int dim = 0;
};

UniformRadial resample_radial(const ScalarField& u) {
  const Grid& g = *u.grid;
  const auto& rn = g.radial_nodes();
  const int n = static_cast<int>(rn.size());
  const VectorField d = nodal_derivatives(u);
  UniformRadial out;
  out.dim = g.dim();
  out.weight_const = g.sphere_measure();
  out.r.resize(static_cast<size_t>(n));
  out.du.resize(static_cast<size_t>(n));
  out.step = (1.0 - g.r_min()) / (n - 1);
  int cell = 0;
  for (int j = 0; j < n; ++j) {
    const double rj = g.r_min() + out.step * j;
    out.r[static_cast<size_t>(j)] = rj;
    while (cell < n - 2 && rn[static_cast<size_t>(cell + 1)] < rj) {
      ++cell;
    }
    const double r0 = rn[static_cast<size_t>(cell)];
    const double r1 = rn[static_cast<size_t>(cell + 1)];
    const double w = std::clamp((rj - r0) / (r1 - r0), 0.0, 1.0);
    out.du[static_cast<size_t>(j)] =
        (1.0 - w) * d.comp[0][static_cast<size_t>(cell)] + w * d.comp[0][static_cast<size_t>(cell + 1)];
  }
  return out;
}

struct Fit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

Fit linfit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  Fit f;
  const double den = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0.0;
  const double mean = sy / n;
  double ss_tot = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double pred = f.slope * x[i] + f.intercept;
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

}  // namespace

double lebesgue_norm(const ScalarField& u, double s) {
  if (std::isinf(s)) {
    double m = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      m = std::max(m, std::abs(u[i]));
    }
    return m;
  }
  if (!(s >= 1.0)) {
    throw std::invalid_argument("lebesgue_norm: requires s >= 1");
  }
  return std::pow(field_pow_integral(u, s), 1.0 / s);
}

double sobolev_norm(const ScalarField& u, double p) {
  if (!(p >= 1.0)) {
    throw std::invalid_argument("sobolev_norm: requires p >= 1");
  }
  const VectorField d = nodal_derivatives(u);
  double acc = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    acc += u.grid->node_volume(i) *
           (std::pow(d.magnitude_sq(i), 0.5 * p) + std::pow(std::abs(u[i]), p));
  }
  return std::pow(acc, 1.0 / p);
}

double b_of(const ScalarField& v, const KirchhoffTerm& a, double p) {
  const double norm = sobolev_norm(v, p);
  return std::pow(a(std::pow(norm, p)), p - 1.0);
}

NikolskiiEstimate nikolskii_seminorm(const ScalarField& u, double sigma, double r,
                                     const ShiftSet& shifts) {
  if (!(sigma > 1.0) || !(sigma < 2.0)) {
    throw std::invalid_argument("nikolskii_seminorm: requires sigma in (1, 2)");
  }
  if (!(r >= 2.0)) {
    throw std::invalid_argument("nikolskii_seminorm: requires r >= 2");
  }
  const Grid& g = *u.grid;
  NikolskiiEstimate est;
  est.sigma = sigma;
  est.r = r;

  if (g.kind() == GridKind::radial_ball) {
    const UniformRadial ur = resample_radial(u);
    const int n = static_cast<int>(ur.r.size());
    const auto cells = shift_cells(shifts, 1.0 - g.r_min(), ur.step);
    double sup = 0.0;
    for (int c : cells) {
      const double h = c * ur.step;
      // Omega_h for the ball: keep r <= 1 - h (the outer sphere is the boundary;
      // the inner cutoff is artificial, not a wall).
      const int jmax = n - 1 - c;
      if (jmax < 1) continue;
      double acc = 0.0;
      for (int j = 0; j <= jmax; ++j) {
        const double diff = ur.du[static_cast<size_t>(j + c)] - ur.du[static_cast<size_t>(j)];
        const double w = ur.weight_const * std::pow(ur.r[static_cast<size_t>(j)], ur.dim - 1) *
                         ur.step * ((j == 0 || j == jmax) ? 0.5 : 1.0);
        acc += w * std::pow(std::abs(diff), r);
      }
      const double value = std::pow(acc, 1.0 / r) / std::pow(h, sigma - 1.0);
      est.table.push_back({0, 0, h, value});
      if (value > sup) {
        sup = value;
        est.argmax_component = 0;
        est.argmax_axis = 0;
        est.argmax_h = h;
      }
    }
    est.seminorm = sup;
    return est;
  }

  const VectorField d = nodal_derivatives(u);
  const int ncomp = g.axes();
  double total = 0.0;
  double best_overall = -1.0;
  for (int comp = 0; comp < ncomp; ++comp) {
    ScalarField dc(u.grid);
    dc.v = d.comp[static_cast<size_t>(comp)];
    double sup = 0.0;
    double sup_h = 0.0;
    int sup_axis = 0;
    for (int axis = 0; axis < g.axes(); ++axis) {
      const double cell = axis == 0 ? g.hx() : g.hy();
      const auto cells = shift_cells(shifts, g.extent(axis), cell);
      for (int c : cells) {
        ShiftRestrict sr = shift_restrict(dc, axis, c);
        ScalarField diff_pow(u.grid);
        for (int j = sr.lo[1]; j <= sr.hi[1]; ++j) {
          for (int i = sr.lo[0]; i <= sr.hi[0]; ++i) {
            const int node = g.index(i, j);
            const double diff = sr.shifted[static_cast<size_t>(node)] - dc[node];
            diff_pow[node] = std::pow(std::abs(diff), r);
          }
        }
        const double acc = integrate_masked(diff_pow, sr);
        const double value = std::pow(acc, 1.0 / r) / std::pow(sr.h, sigma - 1.0);
        est.table.push_back({comp, axis, sr.h, value});
        if (value > sup) {
          sup = value;
          sup_h = sr.h;
          sup_axis = axis;
        }
      }
    }
    total += sup;
    if (sup > best_overall) {
      best_overall = sup;
      est.argmax_component = comp;
      est.argmax_axis = sup_axis;
      est.argmax_h = sup_h;
    }
  }
  est.seminorm = total;
  return est;
}

double nikolskii_norm(const ScalarField& u, double sigma, double r, const ShiftSet& shifts) {
  return sobolev_norm(u, r) + nikolskii_seminorm(u, sigma, r, shifts).seminorm;
}

double weighted_hessian_energy(const ScalarField& u, double r) {
  if (!(r > 2.0)) {
    throw std::invalid_argument("weighted_hessian_energy: requires r > 2");
  }
  const VectorField d = nodal_derivatives(u);
  const HessianField h = hessian(u);
  double acc = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    acc += u.grid->node_volume(i) * std::pow(d.magnitude_sq(i), 0.5 * (r - 2.0)) *
           h.frobenius_sq(i);
  }
  return acc;
}

NormalemmaCheck normalemma_check(const ScalarField& u, double r, const ShiftSet& shifts) {
  NormalemmaCheck out;
  const double sigma = 1.0 + 2.0 / r;
  const NikolskiiEstimate est = nikolskii_seminorm(u, sigma, r, shifts);
  out.lhs = std::pow(est.seminorm, r);
  out.rhs = weighted_hessian_energy(u, r);
  out.degenerate = out.rhs <= 0.0;
  out.min_constant = out.degenerate ? 0.0 : out.lhs / out.rhs;
  return out;
}

std::vector<LadderCheck> moser_ladder_check(const ScalarField& u, const MoserLadder& ladder,
                                            const ExponentContext& ctx, double alpha,
                                            double exponent_cap) {
  if (!ctx.critical_finite()) {
    throw std::invalid_argument("moser_ladder_check: requires lambda finite");
  }
  const ScalarField u_plus = truncate_parts(u, kInf).first;
  std::vector<LadderCheck> out;
  for (size_t n = 0; n < ladder.k.size(); ++n) {
    const double kn = ladder.k[n];
    const double exponent = ctx.p_star * (kn + 1.0);
    if (exponent > exponent_cap) {
      break;
    }
    LadderCheck chk;
    chk.rung = static_cast<int>(n);
    chk.exponent = exponent;
    chk.lhs = lebesgue_norm(u_plus, exponent);
    if (ladder.variant == LadderVariant::superlinear) {
      const double m = alpha + kn * ctx.p + 1.0;
      const double nm = lebesgue_norm(u_plus, m);
      chk.rhs_parts = {1.0, nm, std::pow(nm, m / (ctx.p * (kn + 1.0)))};
    } else {
      const double m = (kn + 1.0) * ctx.p;
      chk.rhs_parts = {1.0, lebesgue_norm(u_plus, m), 0.0};
    }
    const double rhs = chk.rhs_parts[0] + chk.rhs_parts[1] + chk.rhs_parts[2];
    chk.min_constant = chk.lhs / rhs;
    out.push_back(chk);
  }
  return out;
}

AprioriCheck apriori_check(const ScalarField& u, const ScalarField& g,
                           const KirchhoffTerm& a, double p, double s,
                           const ShiftSet& shifts) {
  if (!(s > 2.0)) {
    throw std::invalid_argument("apriori_check: requires s > 2");
  }
  AprioriCheck out;
  out.r_s = r_exponent(p, s);
  out.omega_ps = omega(p, s);
  const double sigma = 1.0 + 2.0 / out.r_s;
  out.lhs = nikolskii_norm(u, sigma, out.r_s, shifts);
  const double g_norm = lebesgue_norm(g, s);
  const double a_val = a(std::pow(sobolev_norm(u, p), p));
  out.rhs_shape = 1.0 + g_norm + std::pow(a_val, out.omega_ps) * std::pow(g_norm, s / out.r_s);
  out.fitted_C = out.lhs / out.rhs_shape;
  return out;
}

LinftyCheck linfty_bound_check(const ScalarField& u, const KirchhoffTerm& a,
                               const ExponentContext& ctx, double alpha, double R,
                               double s) {
  LinftyCheck out;
  out.lhs = lebesgue_norm(u, kInf);
  const BoundFormula bf = bound_formula(ctx, alpha, R, s);
  const double a_val = a(std::pow(sobolev_norm(u, ctx.p), ctx.p));
  if (ctx.p < static_cast<double>(ctx.dim)) {
    const double u_star = lebesgue_norm(u, ctx.p_star);
    if (alpha >= ctx.p - 1.0) {
      out.branch = BoundBranch::subcritical_superlinear;
      const MoserLadder ladder = moser_sequence(ctx, LadderVariant::superlinear, alpha, 0);
      const int n_q = n_for_target(ladder, ctx, bf.q);
      const double hq = h_poly(ctx, n_q, u_star);
      const double aw = std::pow(a_val, bf.omega_pR);
      out.rhs = 1.0 + aw + std::pow(hq, alpha) + aw * std::pow(hq, bf.q / bf.r_R);
    } else {
      out.branch = BoundBranch::subcritical_sublinear;
      const double aw = std::pow(a_val, bf.omega_pR);
      out.rhs = 1.0 + aw + std::pow(u_star, alpha) + aw * std::pow(u_star, bf.q / bf.r_R);
    }
  } else {
    out.branch = BoundBranch::supercritical;
    const double w = sobolev_norm(u, ctx.p);
    out.rhs = 1.0 + std::pow(w, alpha) + std::pow(w, bf.q / bf.r_R);
  }
  out.fitted_C = out.lhs / out.rhs;
  return out;
}

CutoffRate cutoff_divergence_rate(const RadialProfile& prof, double r,
                                  const std::vector<double>& cutoffs, bool weighted,
                                  double quad_tol) {
  if (cutoffs.size() < 3) {
    throw std::invalid_argument("cutoff_divergence_rate: need at least 3 cutoffs");
  }
  for (size_t i = 1; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] < cutoffs[i - 1])) {
      throw std::invalid_argument("cutoff_divergence_rate: cutoffs must decrease");
    }
  }
  const AnalyticEnergies en = analytic_energies(prof, r, quad_tol, cutoffs.front());
  CutoffRate out;
  out.cutoffs = cutoffs;
  out.values.reserve(cutoffs.size());
  for (double eps : cutoffs) {
    out.values.push_back(weighted ? en.weighted_cutoff(eps) : en.w2r_cutoff(eps));
  }
  std::vector<double> lx, ly, y;
  for (size_t i = 0; i < cutoffs.size(); ++i) {
    lx.push_back(std::log(cutoffs[i]));
    ly.push_back(std::log(std::max(out.values[i], 1e-300)));
    y.push_back(out.values[i]);
  }
  const Fit fp = linfit(lx, ly);  // power model: log E vs log eps
  const Fit fl = linfit(lx, y);   // log model:  E vs log eps
  out.exponent = fp.slope;
  out.r2_power = fp.r2;
  out.r2_log = fl.r2;
  out.log_case = fl.r2 > fp.r2;
  return out;
}

}  // namespace pkirch
