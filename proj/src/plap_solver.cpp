#include "pkirch/plap_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pkirch/fracnorm.hpp"

namespace pkirch {

namespace {

// Symmetric positive definite band matrix, lower storage:
// a[i*(bw+1) + (j - i + bw)] = A(i,j) for j in [i-bw, i].
class BandedSpd {
 public:
  BandedSpd(int n, int bw) : n_(n), bw_(bw), a_(static_cast<size_t>(n) * (bw + 1), 0.0) {}

  double& at(int i, int j) { return a_[static_cast<size_t>(i) * (bw_ + 1) + (j - i + bw_)]; }

  void factor() {
    for (int i = 0; i < n_; ++i) {
      const int j0 = std::max(0, i - bw_);
      for (int j = j0; j <= i; ++j) {
        double s = at(i, j);
        const int k0 = std::max(j0, j - bw_);
        for (int k = k0; k < j; ++k) {
          s -= at(i, k) * at(j, k);
        }
        if (j < i) {
          at(i, j) = s / at(j, j);
        } else {
          if (!(s > 0.0)) {
            throw std::runtime_error("BandedSpd: matrix not positive definite");
          }
          at(i, i) = std::sqrt(s);
        }
      }
    }
  }

  void solve(std::vector<double>& x) const {
    for (int i = 0; i < n_; ++i) {
      double s = x[static_cast<size_t>(i)];
      for (int j = std::max(0, i - bw_); j < i; ++j) {
        s -= cat(i, j) * x[static_cast<size_t>(j)];
      }
      x[static_cast<size_t>(i)] = s / cat(i, i);
    }
    for (int i = n_ - 1; i >= 0; --i) {
      double s = x[static_cast<size_t>(i)];
      const int jmax = std::min(n_ - 1, i + bw_);
      for (int j = i + 1; j <= jmax; ++j) {
        s -= cat(j, i) * x[static_cast<size_t>(j)];
      }
      x[static_cast<size_t>(i)] = s / cat(i, i);
    }
  }

 private:
  double cat(int i, int j) const {
    return a_[static_cast<size_t>(i) * (bw_ + 1) + (j - i + bw_)];
  }
  int n_, bw_;
  std::vector<double> a_;
};

// Gradient-term assembly: 1-D grids use linear cells (one gradient sample per
// cell), 2-D rectangles bilinear cells with 2x2 Gauss quadrature.
struct GradAssembly {
  const Grid* grid = nullptr;
  int bw = 1;
  // 2-D shape data
  double bx[4][4], by[4][4];  // [qp][local node]
  double qp_weight = 0.0;

  explicit GradAssembly(const Grid& g) : grid(&g) {
    if (g.kind() == GridKind::rectangle && g.dim() == 2) {
      bw = g.nx() + 1;
      const double gp[2] = {0.5 * (1.0 - 1.0 / std::sqrt(3.0)),
                            0.5 * (1.0 + 1.0 / std::sqrt(3.0))};
      int q = 0;
      for (int b = 0; b < 2; ++b) {
        for (int a = 0; a < 2; ++a, ++q) {
          const double xi = gp[a], eta = gp[b];
          bx[q][0] = -(1.0 - eta) / g.hx();
          bx[q][1] = (1.0 - eta) / g.hx();
          bx[q][2] = -eta / g.hx();
          bx[q][3] = eta / g.hx();
          by[q][0] = -(1.0 - xi) / g.hy();
          by[q][1] = -xi / g.hy();
          by[q][2] = (1.0 - xi) / g.hy();
          by[q][3] = xi / g.hy();
        }
      }
      qp_weight = 0.25 * g.hx() * g.hy();
    }
  }

  int cell_count() const {
    const Grid& g = *grid;
    if (g.kind() == GridKind::radial_ball) return g.num_nodes() - 1;
    if (g.dim() == 1) return g.nx() - 1;
    return (g.nx() - 1) * (g.ny() - 1);
  }

  // 1-D cell data: nodes (c, c+1), measure, spacing
  void cell_1d(int c, int nodes[2], double* measure, double* dx) const {
    const Grid& g = *grid;
    nodes[0] = c;
    nodes[1] = c + 1;
    if (g.kind() == GridKind::radial_ball) {
      const auto& r = g.radial_nodes();
      const double N = g.dim();
      *dx = r[static_cast<size_t>(c + 1)] - r[static_cast<size_t>(c)];
      *measure = g.sphere_measure() *
                 (std::pow(r[static_cast<size_t>(c + 1)], N) - std::pow(r[static_cast<size_t>(c)], N)) / N;
    } else {
      *dx = g.hx();
      *measure = g.hx();
    }
  }

  void cell_2d_nodes(int c, int nodes[4]) const {
    const Grid& g = *grid;
    const int cx = c % (g.nx() - 1);
    const int cy = c / (g.nx() - 1);
    nodes[0] = g.index(cx, cy);
    nodes[1] = g.index(cx + 1, cy);
    nodes[2] = g.index(cx, cy + 1);
    nodes[3] = g.index(cx + 1, cy + 1);
  }

  bool two_dim() const { return grid->kind() == GridKind::rectangle && grid->dim() == 2; }
};

struct GradTerms {
  double energy = 0.0;           // int (|grad u|^2 + eps^2)^(p/2) / p  (no k factor)
  std::vector<double> gradient;  // its derivative w.r.t. nodal values
};

GradTerms grad_terms(const GradAssembly& as, const std::vector<double>& u, double p,
                     double eps) {
  GradTerms out;
  out.gradient.assign(u.size(), 0.0);
  const double e2 = eps * eps;
  if (!as.two_dim()) {
    for (int c = 0; c < as.cell_count(); ++c) {
      int nd[2];
      double vol, dx;
      as.cell_1d(c, nd, &vol, &dx);
      const double du = (u[static_cast<size_t>(nd[1])] - u[static_cast<size_t>(nd[0])]) / dx;
      const double s2 = du * du + e2;
      out.energy += vol * std::pow(s2, 0.5 * p) / p;
      const double f = vol * std::pow(s2, 0.5 * (p - 2.0)) * du / dx;
      out.gradient[static_cast<size_t>(nd[0])] -= f;
      out.gradient[static_cast<size_t>(nd[1])] += f;
    }
    return out;
  }
  for (int c = 0; c < as.cell_count(); ++c) {
    int nd[4];
    as.cell_2d_nodes(c, nd);
    double ul[4];
    for (int a = 0; a < 4; ++a) ul[a] = u[static_cast<size_t>(nd[a])];
    for (int q = 0; q < 4; ++q) {
      double gx = 0.0, gy = 0.0;
      for (int a = 0; a < 4; ++a) {
        gx += as.bx[q][a] * ul[a];
        gy += as.by[q][a] * ul[a];
      }
      const double s2 = gx * gx + gy * gy + e2;
      out.energy += as.qp_weight * std::pow(s2, 0.5 * p) / p;
      const double phi = as.qp_weight * std::pow(s2, 0.5 * (p - 2.0));
      for (int a = 0; a < 4; ++a) {
        out.gradient[static_cast<size_t>(nd[a])] += phi * (gx * as.bx[q][a] + gy * as.by[q][a]);
      }
    }
  }
  return out;
}

// Frozen-coefficient SPD system  diag(V) + kfac * K(u)  for the Picard step.
BandedSpd picard_matrix(const GradAssembly& as, const std::vector<double>& u, double p,
                        double eps, double kfac) {
  const Grid& g = *as.grid;
  BandedSpd A(g.num_nodes(), as.bw);
  const double e2 = eps * eps;
  for (int i = 0; i < g.num_nodes(); ++i) {
    A.at(i, i) = g.node_volume(i);
  }
  if (!as.two_dim()) {
    for (int c = 0; c < as.cell_count(); ++c) {
      int nd[2];
      double vol, dx;
      as.cell_1d(c, nd, &vol, &dx);
      const double du = (u[static_cast<size_t>(nd[1])] - u[static_cast<size_t>(nd[0])]) / dx;
      const double w = kfac * vol * std::pow(du * du + e2, 0.5 * (p - 2.0)) / (dx * dx);
      A.at(nd[0], nd[0]) += w;
      A.at(nd[1], nd[1]) += w;
      A.at(nd[1], nd[0]) -= w;
    }
  } else {
    for (int c = 0; c < as.cell_count(); ++c) {
      int nd[4];
      as.cell_2d_nodes(c, nd);
      double ul[4];
      for (int a = 0; a < 4; ++a) ul[a] = u[static_cast<size_t>(nd[a])];
      for (int q = 0; q < 4; ++q) {
        double gx = 0.0, gy = 0.0;
        for (int a = 0; a < 4; ++a) {
          gx += as.bx[q][a] * ul[a];
          gy += as.by[q][a] * ul[a];
        }
        const double phi = kfac * as.qp_weight * std::pow(gx * gx + gy * gy + e2, 0.5 * (p - 2.0));
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 4; ++b) {
            if (nd[a] >= nd[b]) {
              A.at(nd[a], nd[b]) += phi * (as.bx[q][a] * as.bx[q][b] + as.by[q][a] * as.by[q][b]);
            }
          }
        }
      }
    }
  }
  return A;
}

double total_energy(const GradAssembly& as, const std::vector<double>& u,
                    const LocalProblem& prob, double kfac, double eps) {
  const Grid& g = *as.grid;
  GradTerms gt = grad_terms(as, u, prob.p, eps);
  double low = 0.0;
  for (int i = 0; i < g.num_nodes(); ++i) {
    low += g.node_volume(i) * (0.5 * u[static_cast<size_t>(i)] * u[static_cast<size_t>(i)] -
                               prob.g[i] * u[static_cast<size_t>(i)]);
  }
  return kfac * gt.energy + low;
}

}  // namespace

double LocalProblem::eps_value() const {
  if (eps >= 0.0) return eps;
  return 1e-6 * g.grid->diameter();
}

void LocalProblem::validate() const {
  if (!(p > 2.0)) throw std::invalid_argument("LocalProblem: p must be > 2");
  if (!(k > 0.0)) throw std::invalid_argument("LocalProblem: k must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("LocalProblem: tol must be > 0");
  const double e = eps_value();
  if (!(e >= 0.0) || !(e <= 1e-2)) {
    throw std::invalid_argument("LocalProblem: eps must lie in [0, 1e-2]");
  }
  if (max_iter < 1) throw std::invalid_argument("LocalProblem: max_iter must be >= 1");
  g.check_finite("LocalProblem.g");
}

double energy(const ScalarField& u, const LocalProblem& prob) {
  prob.validate();
  GradAssembly as(*u.grid);
  const double kfac = std::pow(prob.k, prob.p - 2.0);
  return total_energy(as, u.v, prob, kfac, prob.eps_value());
}

ScalarField residual_field(const ScalarField& u, const LocalProblem& prob) {
  prob.validate();
  const Grid& g = *u.grid;
  GradAssembly as(g);
  const double kfac = std::pow(prob.k, prob.p - 2.0);
  GradTerms gt = grad_terms(as, u.v, prob.p, prob.eps_value());
  ScalarField r(u.grid);
  for (int i = 0; i < g.num_nodes(); ++i) {
    r[i] = kfac * gt.gradient[static_cast<size_t>(i)] / g.node_volume(i) + u[i] - prob.g[i];
  }
  r.check_finite("residual_field");
  return r;
}

double residual_l2(const ScalarField& u, const LocalProblem& prob) {
  const ScalarField r = residual_field(u, prob);
  double s = 0.0;
  for (int i = 0; i < r.size(); ++i) {
    s += u.grid->node_volume(i) * r[i] * r[i];
  }
  return std::sqrt(s);
}

SolveReport solve_scaled(const LocalProblem& prob) {
  return solve_scaled(prob, ScalarField(prob.g.grid, 0.0));
}

SolveReport solve_scaled(const LocalProblem& prob, const ScalarField& guess) {
  prob.validate();
  guess.check_finite("solve_scaled guess");
  const Grid& g = *prob.g.grid;
  GradAssembly as(g);
  const double kfac = std::pow(prob.k, prob.p - 2.0);
  const double eps = prob.eps_value();

  SolveReport rep;
  rep.u = guess;
  std::vector<double>& u = rep.u.v;

  double J = total_energy(as, u, prob, kfac, eps);
  rep.energy_history.push_back(J);

  for (int it = 0; it < prob.max_iter; ++it) {
    GradTerms gt = grad_terms(as, u, prob.p, eps);
    std::vector<double> grad_J(u.size());
    double res2 = 0.0;
    for (int i = 0; i < g.num_nodes(); ++i) {
      grad_J[static_cast<size_t>(i)] =
          kfac * gt.gradient[static_cast<size_t>(i)] +
          g.node_volume(i) * (u[static_cast<size_t>(i)] - prob.g[i]);
      const double r = grad_J[static_cast<size_t>(i)] / g.node_volume(i);
      res2 += g.node_volume(i) * r * r;
    }
    const double res = std::sqrt(res2);
    rep.residual_history.push_back(res);
    if (!std::isfinite(res)) {
      throw std::runtime_error("solve_scaled: residual is not finite");
    }
    if (res <= prob.tol) {
      rep.converged = true;
      break;
    }

    BandedSpd A = picard_matrix(as, u, prob.p, eps, kfac);
    A.factor();
    std::vector<double> d(grad_J);
    for (double& x : d) x = -x;
    A.solve(d);

    double slope = 0.0;
    for (size_t i = 0; i < d.size(); ++i) slope += grad_J[i] * d[i];
    if (!(slope < 0.0)) {
      rep.converged = false;  // no descent direction left at this precision
      break;
    }

    double alpha = 1.0;
    bool accepted = false;
    std::vector<double> trial(u.size());
    for (int bt = 0; bt < 50; ++bt) {
      for (size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + alpha * d[i];
      const double Jt = total_energy(as, trial, prob, kfac, eps);
      if (std::isfinite(Jt) && Jt <= J + 1e-4 * alpha * slope) {
        u = trial;
        J = Jt;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    ++rep.iterations;
    rep.energy_history.push_back(J);
    for (double x : u) {
      if (!std::isfinite(x)) {
        throw std::runtime_error("solve_scaled: NaN in iterates");
      }
    }
    if (!accepted) {
      break;  // line search exhausted; flag stays nonconverged
    }
  }
  if (!rep.converged && !rep.residual_history.empty() &&
      rep.residual_history.back() <= prob.tol) {
    rep.converged = true;
  }
  if (!rep.converged) {
    // max_iter path: record the final residual
    const double res = residual_l2(rep.u, prob);
    rep.residual_history.push_back(res);
    rep.converged = res <= prob.tol;
  }
  return rep;
}

SolveReport solve_linearized_b(double b, double t, const ScalarField& g, double p,
                               double eps, double tol, const ScalarField* warm_start) {
  if (!(t >= 0.0) || !(t <= 1.0)) {
    throw std::invalid_argument("solve_linearized: t must lie in [0, 1]");
  }
  if (!(b > 0.0)) {
    throw std::invalid_argument("solve_linearized: b must be > 0");
  }
  if (t == 0.0) {  // T_0 is identically zero
    SolveReport rep;
    rep.u = ScalarField(g.grid, 0.0);
    rep.converged = true;
    rep.residual_history.push_back(0.0);
    rep.energy_history.push_back(0.0);
    return rep;
  }
  const double k = std::pow(b, 1.0 / (p - 2.0));
  LocalProblem scaled;
  scaled.p = p;
  scaled.k = 1.0;
  scaled.g = g;
  for (int i = 0; i < g.size(); ++i) {
    scaled.g[i] = t * k * g[i];
  }
  // The scaled problem regularizes with k*eps so that u = u_hat/k satisfies the
  // unscaled eps-regularized equation exactly; eps shrinks if k would push the
  // scaled value outside the admissible range.
  double e = eps < 0.0 ? 1e-6 * g.grid->diameter() : eps;
  e = std::min(e, 1e-2 / k);
  scaled.eps = e * k;
  scaled.tol = tol * k * std::max(1.0, k);
  SolveReport rep;
  if (warm_start != nullptr) {
    ScalarField w = *warm_start;
    for (int i = 0; i < w.size(); ++i) w[i] *= k;
    rep = solve_scaled(scaled, w);
  } else {
    rep = solve_scaled(scaled);
  }
  for (double& x : rep.u.v) {
    x /= k;
  }
  for (double& r : rep.residual_history) {
    r /= k;
  }
  rep.u.check_finite("solve_linearized");
  return rep;
}

SolveReport solve_linearized(const ScalarField& v, double t, const ScalarField& g,
                             const KirchhoffTerm& a, double p, double eps, double tol,
                             const ScalarField* warm_start) {
  const double b = b_of(v, a, p);
  return solve_linearized_b(b, t, g, p, eps, tol, warm_start);
}

}  // namespace pkirch
