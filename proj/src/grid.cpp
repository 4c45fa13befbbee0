#include "pkirch/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace pkirch {

namespace {

double sphere_surface(int dim) {
  // |S^{N-1}| = 2 pi^{N/2} / Gamma(N/2)
  return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
}

// Spacing list on [r_min, 1]: geometric growth with the given ratio starting
// from a first cell of size ~r_min, switching to a uniform tail once that is
// enough to fill the interval; everything is rescaled to fit exactly.
std::vector<double> radial_spacings(int ncells, double r_min, double ratio) {
  const double extent = 1.0 - r_min;
  const double g = ratio;
  double d0 = r_min;
  const double pure_geom = d0 * (std::pow(g, ncells) - 1.0) / (g - 1.0);
  std::vector<double> d(static_cast<size_t>(ncells));
  if (pure_geom < extent) {
    // Few nodes relative to the inner scale: keep the ratio, enlarge the base.
    d0 = extent * (g - 1.0) / (std::pow(g, ncells) - 1.0);
    double w = d0;
    for (int i = 0; i < ncells; ++i) {
      d[static_cast<size_t>(i)] = w;
      w *= g;
    }
    return d;
  }
  int m = ncells - 1;
  for (int cand = 0; cand < ncells; ++cand) {
    const double geom_part = d0 * (std::pow(g, cand + 1) - 1.0) / (g - 1.0);
    const double tail = d0 * std::pow(g, cand) * (ncells - 1 - cand);
    if (geom_part + tail >= extent) {
      m = cand;
      break;
    }
  }
  double total = 0.0;
  for (int i = 0; i < ncells; ++i) {
    d[static_cast<size_t>(i)] = d0 * std::pow(g, std::min(i, m));
    total += d[static_cast<size_t>(i)];
  }
  const double scale = extent / total;
  for (double& w : d) {
    w *= scale;
  }
  return d;
}

}  // namespace

std::shared_ptr<const Grid> Grid::make(const GridSpec& spec) {
  auto grid = std::shared_ptr<Grid>(new Grid(spec));
  if (spec.kind == GridKind::rectangle) {
    if (spec.dim != 1 && spec.dim != 2) {
      throw std::invalid_argument("Grid: rectangle dim must be 1 or 2");
    }
    for (int a = 0; a < spec.dim; ++a) {
      if (spec.resolution[static_cast<size_t>(a)] < 8) {
        throw std::invalid_argument("Grid: resolution per axis must be >= 8");
      }
      if (!(spec.length[static_cast<size_t>(a)] > 0.0)) {
        throw std::invalid_argument("Grid: length must be positive");
      }
    }
    const int nx = spec.resolution[0];
    const int ny = spec.dim == 2 ? spec.resolution[1] : 1;
    grid->h_[0] = spec.length[0] / (nx - 1);
    grid->h_[1] = spec.dim == 2 ? spec.length[1] / (ny - 1) : 0.0;
    grid->volume_.assign(static_cast<size_t>(nx) * ny, 0.0);
    for (int j = 0; j < ny; ++j) {
      const double wy =
          spec.dim == 2 ? grid->h_[1] * ((j == 0 || j == ny - 1) ? 0.5 : 1.0) : 1.0;
      for (int i = 0; i < nx; ++i) {
        const double wx = grid->h_[0] * ((i == 0 || i == nx - 1) ? 0.5 : 1.0);
        grid->volume_[static_cast<size_t>(grid->index(i, j))] = wx * wy;
      }
    }
    grid->measure_ = spec.length[0] * (spec.dim == 2 ? spec.length[1] : 1.0);
    grid->diameter_ = std::sqrt(spec.length[0] * spec.length[0] +
                                (spec.dim == 2 ? spec.length[1] * spec.length[1] : 0.0));
    grid->min_spacing_ = spec.dim == 2 ? std::min(grid->h_[0], grid->h_[1]) : grid->h_[0];
  } else {
    if (spec.dim < 2) {
      throw std::invalid_argument("Grid: radial ball dimension must be >= 2");
    }
    if (spec.resolution[0] < 8) {
      throw std::invalid_argument("Grid: resolution must be >= 8");
    }
    if (!(spec.r_min > 0.0) || !(spec.r_min < 0.5)) {
      throw std::invalid_argument("Grid: r_min must lie in (0, 0.5)");
    }
    if (!(spec.grading > 1.0)) {
      throw std::invalid_argument("Grid: grading ratio must be > 1");
    }
    const int n = spec.resolution[0];
    const auto d = radial_spacings(n - 1, spec.r_min, spec.grading);
    grid->r_.resize(static_cast<size_t>(n));
    grid->r_[0] = spec.r_min;
    for (int i = 1; i < n; ++i) {
      grid->r_[static_cast<size_t>(i)] = grid->r_[static_cast<size_t>(i - 1)] + d[static_cast<size_t>(i - 1)];
    }
    grid->r_.back() = 1.0;
    grid->omega_n_ = sphere_surface(spec.dim);
    grid->volume_.assign(static_cast<size_t>(n), 0.0);
    const double N = spec.dim;
    auto shell = [&](double a, double b) {
      return grid->omega_n_ * (std::pow(b, N) - std::pow(a, N)) / N;
    };
    for (int i = 0; i < n; ++i) {
      const double lo = i == 0 ? grid->r_[0] : 0.5 * (grid->r_[static_cast<size_t>(i - 1)] + grid->r_[static_cast<size_t>(i)]);
      const double hi = i == n - 1 ? 1.0 : 0.5 * (grid->r_[static_cast<size_t>(i)] + grid->r_[static_cast<size_t>(i + 1)]);
      grid->volume_[static_cast<size_t>(i)] = shell(lo, hi);
    }
    grid->measure_ = shell(spec.r_min, 1.0);
    grid->diameter_ = 2.0;
    grid->min_spacing_ = *std::min_element(d.begin(), d.end());
  }
  return grid;
}

int Grid::nodes_per_axis(int axis) const {
  if (spec_.kind == GridKind::radial_ball) {
    return spec_.resolution[0];
  }
  return spec_.resolution[static_cast<size_t>(axis)];
}

double Grid::extent(int axis) const {
  if (spec_.kind == GridKind::radial_ball) {
    return 1.0 - spec_.r_min;
  }
  return spec_.length[static_cast<size_t>(axis)];
}

double Grid::coord(int node, int axis) const {
  if (spec_.kind == GridKind::radial_ball) {
    return r_[static_cast<size_t>(node)];
  }
  if (axis == 0) {
    return h_[0] * (node % nx());
  }
  return h_[1] * (node / nx());
}

std::string Grid::header_block() const {
  std::ostringstream os;
  if (spec_.kind == GridKind::rectangle) {
    os << "# grid_kind: rectangle\n# dim: " << spec_.dim << "\n# resolution: " << nx();
    if (spec_.dim == 2) os << " " << ny();
    os << "\n# length: " << spec_.length[0];
    if (spec_.dim == 2) os << " " << spec_.length[1];
    os << "\n";
  } else {
    os << "# grid_kind: radial-ball\n# dim: " << spec_.dim
       << "\n# resolution: " << spec_.resolution[0] << "\n# r_min: " << spec_.r_min
       << "\n# grading: " << spec_.grading << "\n";
  }
  os << "# measure: " << measure_ << "\n";
  return os.str();
}

double ScalarField::max() const { return *std::max_element(v.begin(), v.end()); }
double ScalarField::min() const { return *std::min_element(v.begin(), v.end()); }

void ScalarField::check_finite(const char* what) const {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::runtime_error(std::string(what) + ": non-finite field value");
    }
  }
}

ScalarField constant_field(const GridPtr& grid, double value) {
  ScalarField out(grid, value);
  out.check_finite("constant_field");
  return out;
}

double HessianField::frobenius_sq(int node) const {
  const size_t i = static_cast<size_t>(node);
  if (!rr.empty()) {
    return rr[i] * rr[i] + (grid->dim() - 1) * tt[i] * tt[i];
  }
  double s = xx[i] * xx[i];
  if (!yy.empty()) {
    s += yy[i] * yy[i] + 2.0 * xy[i] * xy[i];
  }
  return s;
}

namespace {

// nonuniform centered first derivative (parabolic fit), one-sided variants
double d1_centered(double um, double u0, double up, double hm, double hp) {
  return ((up - u0) / hp) * hm / (hm + hp) + ((u0 - um) / hm) * hp / (hm + hp);
}
double d1_onesided(double u0, double u1, double u2, double a, double b) {
  // derivative at 0 of the parabola through (0,u0), (a,u1), (b,u2), 0 < a < b
  return -u0 * (a + b) / (a * b) + u1 * b / (a * (b - a)) - u2 * a / (b * (b - a));
}
double d2_centered(double um, double u0, double up, double hm, double hp) {
  return 2.0 * ((up - u0) / hp - (u0 - um) / hm) / (hm + hp);
}

}  // namespace

VectorField gradient(const ScalarField& u) {
  const Grid& g = *u.grid;
  VectorField out;
  out.grid = u.grid;
  if (g.kind() == GridKind::radial_ball) {
    const auto& r = g.radial_nodes();
    const int n = static_cast<int>(r.size());
    auto& d = out.comp[0];
    d.resize(static_cast<size_t>(n));
    d[0] = d1_onesided(u[0], u[1], u[2], r[1] - r[0], r[2] - r[0]);
    for (int i = 1; i < n - 1; ++i) {
      d[static_cast<size_t>(i)] = d1_centered(u[i - 1], u[i], u[i + 1], r[static_cast<size_t>(i)] - r[static_cast<size_t>(i - 1)],
                                              r[static_cast<size_t>(i + 1)] - r[static_cast<size_t>(i)]);
    }
    d[static_cast<size_t>(n - 1)] = 0.0;  // Neumann wall at r = 1
    return out;
  }
  const int nx = g.nx();
  const int ny = g.ny();
  out.comp[0].assign(static_cast<size_t>(nx) * ny, 0.0);
  if (g.dim() == 2) {
    out.comp[1].assign(static_cast<size_t>(nx) * ny, 0.0);
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int n = g.index(i, j);
      if (i > 0 && i < nx - 1) {
        out.comp[0][static_cast<size_t>(n)] = (u[g.index(i + 1, j)] - u[g.index(i - 1, j)]) / (2.0 * g.hx());
      }  // boundary: reflected ghost makes the normal derivative vanish
      if (g.dim() == 2 && j > 0 && j < ny - 1) {
        out.comp[1][static_cast<size_t>(n)] = (u[g.index(i, j + 1)] - u[g.index(i, j - 1)]) / (2.0 * g.hy());
      }
    }
  }
  return out;
}

VectorField nodal_derivatives(const ScalarField& u) {
  const Grid& g = *u.grid;
  VectorField out;
  out.grid = u.grid;
  if (g.kind() == GridKind::radial_ball) {
    const auto& r = g.radial_nodes();
    const int n = static_cast<int>(r.size());
    auto& d = out.comp[0];
    d.resize(static_cast<size_t>(n));
    d[0] = d1_onesided(u[0], u[1], u[2], r[1] - r[0], r[2] - r[0]);
    for (int i = 1; i < n - 1; ++i) {
      d[static_cast<size_t>(i)] =
          d1_centered(u[i - 1], u[i], u[i + 1], r[static_cast<size_t>(i)] - r[static_cast<size_t>(i - 1)],
                      r[static_cast<size_t>(i + 1)] - r[static_cast<size_t>(i)]);
    }
    d[static_cast<size_t>(n - 1)] =
        -d1_onesided(u[n - 1], u[n - 2], u[n - 3], r[static_cast<size_t>(n - 1)] - r[static_cast<size_t>(n - 2)],
                     r[static_cast<size_t>(n - 1)] - r[static_cast<size_t>(n - 3)]);
    return out;
  }
  const int nx = g.nx();
  const int ny = g.ny();
  out.comp[0].assign(static_cast<size_t>(nx) * ny, 0.0);
  if (g.dim() == 2) {
    out.comp[1].assign(static_cast<size_t>(nx) * ny, 0.0);
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const size_t n = static_cast<size_t>(g.index(i, j));
      if (i == 0) {
        out.comp[0][n] = d1_onesided(u[g.index(0, j)], u[g.index(1, j)], u[g.index(2, j)],
                                     g.hx(), 2.0 * g.hx());
      } else if (i == nx - 1) {
        out.comp[0][n] = -d1_onesided(u[g.index(nx - 1, j)], u[g.index(nx - 2, j)],
                                      u[g.index(nx - 3, j)], g.hx(), 2.0 * g.hx());
      } else {
        out.comp[0][n] = (u[g.index(i + 1, j)] - u[g.index(i - 1, j)]) / (2.0 * g.hx());
      }
      if (g.dim() == 2) {
        if (j == 0) {
          out.comp[1][n] = d1_onesided(u[g.index(i, 0)], u[g.index(i, 1)], u[g.index(i, 2)],
                                       g.hy(), 2.0 * g.hy());
        } else if (j == ny - 1) {
          out.comp[1][n] = -d1_onesided(u[g.index(i, ny - 1)], u[g.index(i, ny - 2)],
                                        u[g.index(i, ny - 3)], g.hy(), 2.0 * g.hy());
        } else {
          out.comp[1][n] = (u[g.index(i, j + 1)] - u[g.index(i, j - 1)]) / (2.0 * g.hy());
        }
      }
    }
  }
  return out;
}

HessianField hessian(const ScalarField& u) {
  const Grid& g = *u.grid;
  HessianField out;
  out.grid = u.grid;
  if (g.kind() == GridKind::radial_ball) {
    const auto& r = g.radial_nodes();
    const int n = static_cast<int>(r.size());
    out.rr.resize(static_cast<size_t>(n));
    out.tt.resize(static_cast<size_t>(n));
    const VectorField grad = gradient(u);
    out.rr[0] = d2_centered(u[0], u[1], u[2], r[1] - r[0], r[2] - r[1]);
    for (int i = 1; i < n - 1; ++i) {
      out.rr[static_cast<size_t>(i)] = d2_centered(u[i - 1], u[i], u[i + 1], r[static_cast<size_t>(i)] - r[static_cast<size_t>(i - 1)],
                                                   r[static_cast<size_t>(i + 1)] - r[static_cast<size_t>(i)]);
    }
    out.rr[static_cast<size_t>(n - 1)] =
        d2_centered(u[n - 3], u[n - 2], u[n - 1], r[static_cast<size_t>(n - 2)] - r[static_cast<size_t>(n - 3)],
                    r[static_cast<size_t>(n - 1)] - r[static_cast<size_t>(n - 2)]);
    for (int i = 0; i < n; ++i) {
      out.tt[static_cast<size_t>(i)] = grad.comp[0][static_cast<size_t>(i)] / r[static_cast<size_t>(i)];
    }
    return out;
  }
  const int nx = g.nx();
  const int ny = g.ny();
  const size_t total = static_cast<size_t>(nx) * ny;
  out.xx.assign(total, 0.0);
  if (g.dim() == 2) {
    out.yy.assign(total, 0.0);
    out.xy.assign(total, 0.0);
  }
  // boundary rows shift the compact stencil inward: exact on quadratics, zero
  // on affine fields everywhere
  auto shift = [](int i, int n) { return i <= 0 ? 1 : (i >= n - 1 ? n - 2 : i); };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const size_t n = static_cast<size_t>(g.index(i, j));
      const int ic = shift(i, nx);
      out.xx[n] = (u[g.index(ic + 1, j)] - 2.0 * u[g.index(ic, j)] + u[g.index(ic - 1, j)]) /
                  (g.hx() * g.hx());
      if (g.dim() == 2) {
        const int jc = shift(j, ny);
        out.yy[n] = (u[g.index(i, jc + 1)] - 2.0 * u[g.index(i, jc)] + u[g.index(i, jc - 1)]) /
                    (g.hy() * g.hy());
      }
    }
  }
  if (g.dim() == 2) {
    const VectorField dx = nodal_derivatives(u);
    ScalarField gx(u.grid);
    gx.v = dx.comp[0];
    const VectorField dxy = nodal_derivatives(gx);
    out.xy = dxy.comp[1];
  }
  return out;
}

ScalarField p_flux_divergence(const ScalarField& u, double p, double eps) {
  if (!(p > 2.0) || !(eps >= 0.0)) {
    throw std::invalid_argument("p_flux_divergence: requires p > 2 and eps >= 0");
  }
  const Grid& g = *u.grid;
  ScalarField out(u.grid);
  auto phi = [&](double s2) { return std::pow(s2 + eps * eps, 0.5 * (p - 2.0)); };

  if (g.kind() == GridKind::radial_ball) {
    const auto& r = g.radial_nodes();
    const int n = static_cast<int>(r.size());
    const double N = g.dim();
    std::vector<double> W(static_cast<size_t>(n - 1));
    std::vector<double> rf(static_cast<size_t>(n - 1));
    for (int i = 0; i < n - 1; ++i) {
      const double dr = r[static_cast<size_t>(i + 1)] - r[static_cast<size_t>(i)];
      const double du = (u[i + 1] - u[i]) / dr;
      rf[static_cast<size_t>(i)] = 0.5 * (r[static_cast<size_t>(i)] + r[static_cast<size_t>(i + 1)]);
      W[static_cast<size_t>(i)] = std::pow(rf[static_cast<size_t>(i)], N - 1.0) * phi(du * du) * du;
    }
    for (int i = 0; i < n; ++i) {
      int a = i - 1, b = i;
      if (i == 0) { a = 0; b = 1; }
      if (i == n - 1) { a = n - 3; b = n - 2; }
      out[i] = (W[static_cast<size_t>(b)] - W[static_cast<size_t>(a)]) /
               ((rf[static_cast<size_t>(b)] - rf[static_cast<size_t>(a)]) * std::pow(r[static_cast<size_t>(i)], N - 1.0));
    }
    out.check_finite("p_flux_divergence");
    return out;
  }

  const int nx = g.nx();
  const int ny = g.ny();
  const VectorField grad = g.dim() == 2 ? gradient(u) : VectorField{};
  // x-direction
  {
    std::vector<double> F(static_cast<size_t>(nx - 1));
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx - 1; ++i) {
        const double du = (u[g.index(i + 1, j)] - u[g.index(i, j)]) / g.hx();
        double tang = 0.0;
        if (g.dim() == 2) {
          tang = 0.5 * (grad.comp[1][static_cast<size_t>(g.index(i, j))] +
                        grad.comp[1][static_cast<size_t>(g.index(i + 1, j))]);
        }
        F[static_cast<size_t>(i)] = phi(du * du + tang * tang) * du;
      }
      for (int i = 0; i < nx; ++i) {
        int a = i - 1, b = i;
        if (i == 0) { a = 0; b = 1; }
        if (i == nx - 1) { a = nx - 3; b = nx - 2; }
        out[g.index(i, j)] += (F[static_cast<size_t>(b)] - F[static_cast<size_t>(a)]) / g.hx();
      }
    }
  }
  if (g.dim() == 2) {
    std::vector<double> F(static_cast<size_t>(ny - 1));
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny - 1; ++j) {
        const double du = (u[g.index(i, j + 1)] - u[g.index(i, j)]) / g.hy();
        const double tang = 0.5 * (grad.comp[0][static_cast<size_t>(g.index(i, j))] +
                                   grad.comp[0][static_cast<size_t>(g.index(i, j + 1))]);
        F[static_cast<size_t>(j)] = phi(du * du + tang * tang) * du;
      }
      for (int j = 0; j < ny; ++j) {
        int a = j - 1, b = j;
        if (j == 0) { a = 0; b = 1; }
        if (j == ny - 1) { a = ny - 3; b = ny - 2; }
        out[g.index(i, j)] += (F[static_cast<size_t>(b)] - F[static_cast<size_t>(a)]) / g.hy();
      }
    }
  }
  out.check_finite("p_flux_divergence");
  return out;
}

double integrate(const ScalarField& w) {
  const auto& vol = w.grid->node_volumes();
  double s = 0.0;
  for (size_t i = 0; i < vol.size(); ++i) {
    s += vol[i] * w.v[i];
  }
  return s;
}

ShiftRestrict shift_restrict(const ScalarField& u, int axis, int cells) {
  const Grid& g = *u.grid;
  if (g.kind() != GridKind::rectangle) {
    throw std::invalid_argument(
        "shift_restrict: lattice shifts require a uniform rectangle grid; graded radial "
        "grids are handled by resampled difference quotients in the norm code");
  }
  if (axis < 0 || axis >= g.axes()) {
    throw std::invalid_argument("shift_restrict: bad axis");
  }
  if (cells < 1) {
    throw std::invalid_argument("shift_restrict: shift must be at least one cell");
  }
  const double ha = axis == 0 ? g.hx() : g.hy();
  ShiftRestrict out;
  out.axis = axis;
  out.cells = cells;
  out.h = cells * ha;
  for (int a = 0; a < g.axes(); ++a) {
    const double step = a == 0 ? g.hx() : g.hy();
    const double La = g.extent(a);
    if (!(out.h < 0.5 * La)) {
      throw std::invalid_argument("shift_restrict: shift exceeds half the domain extent");
    }
    const double tol = 1e-9 * step;
    out.lo[static_cast<size_t>(a)] = static_cast<int>(std::ceil((out.h - tol) / step));
    out.hi[static_cast<size_t>(a)] = static_cast<int>(std::floor((La - out.h + tol) / step));
  }
  if (g.axes() == 1) {
    out.lo[1] = out.hi[1] = 0;
  }
  out.shifted.assign(u.v.size(), 0.0);
  const int nx = g.nx();
  const int ny = g.ny();
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int is = axis == 0 ? i + cells : i;
      const int js = axis == 1 ? j + cells : j;
      if (is < nx && js < ny) {
        out.shifted[static_cast<size_t>(g.index(i, j))] = u[g.index(is, js)];
      }
    }
  }
  out.mask_measure = 1.0;
  for (int a = 0; a < g.axes(); ++a) {
    const double step = a == 0 ? g.hx() : g.hy();
    out.mask_measure *= step * (out.hi[static_cast<size_t>(a)] - out.lo[static_cast<size_t>(a)]);
  }
  return out;
}

double integrate_masked(const ScalarField& w, const ShiftRestrict& mask) {
  const Grid& g = *w.grid;
  if (g.kind() != GridKind::rectangle) {
    throw std::invalid_argument("integrate_masked: rectangle grids only");
  }
  double s = 0.0;
  for (int j = mask.lo[1]; j <= mask.hi[1]; ++j) {
    const double wy = g.dim() == 2
                          ? g.hy() * ((j == mask.lo[1] || j == mask.hi[1]) ? 0.5 : 1.0)
                          : 1.0;
    for (int i = mask.lo[0]; i <= mask.hi[0]; ++i) {
      const double wx = g.hx() * ((i == mask.lo[0] || i == mask.hi[0]) ? 0.5 : 1.0);
      s += wx * wy * w[g.index(i, j)];
    }
  }
  return s;
}

std::pair<ScalarField, ScalarField> truncate_parts(const ScalarField& u, double m) {
  if (!(m > 0.0)) {
    throw std::invalid_argument("truncate_parts: requires m > 0");
  }
  ScalarField plus(u.grid);
  ScalarField minus(u.grid);
  for (int i = 0; i < u.size(); ++i) {
    plus[i] = std::min(std::max(u[i], 0.0), m);
    minus[i] = std::min(std::max(-u[i], 0.0), m);
  }
  return {std::move(plus), std::move(minus)};
}

}  // namespace pkirch
