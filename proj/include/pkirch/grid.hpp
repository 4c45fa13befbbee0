#ifndef PKIRCH_GRID_HPP
#define PKIRCH_GRID_HPP

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace pkirch {

enum class GridKind { rectangle, radial_ball };

/// Discretization parameters.
///   rectangle: vertex-centered tensor grid on [0,Lx] (dim 1) or [0,Lx]x[0,Ly]
///     (dim 2), uniform spacing per axis.
///   radial_ball: 1-D grid in r on [r_min, 1] representing the ball
///     B(0,1) in R^dim; spacing grows geometrically away from r_min with the
///     given ratio and is capped by a uniform tail so that the node count fits.
struct GridSpec {
  GridKind kind = GridKind::rectangle;
  int dim = 2;
  std::array<int, 2> resolution{64, 64};
  std::array<double, 2> length{1.0, 1.0};
  double r_min = 1e-4;
  double grading = 1.05;
};

class Grid {
 public:
  static std::shared_ptr<const Grid> make(const GridSpec& spec);

  GridKind kind() const { return spec_.kind; }
  int dim() const { return spec_.dim; }
  /// Number of lattice axes: rectangle dim, radial 1.
  int axes() const { return spec_.kind == GridKind::rectangle ? spec_.dim : 1; }
  int num_nodes() const { return static_cast<int>(volume_.size()); }
  int nodes_per_axis(int axis) const;
  double extent(int axis) const;

  // rectangle addressing
  int nx() const { return spec_.resolution[0]; }
  int ny() const { return spec_.dim == 2 ? spec_.resolution[1] : 1; }
  double hx() const { return h_[0]; }
  double hy() const { return h_[1]; }
  int index(int i, int j) const { return i + nx() * j; }

  // radial data
  const std::vector<double>& radial_nodes() const { return r_; }
  double r_min() const { return spec_.r_min; }
  /// Surface measure of the unit sphere in R^dim.
  double sphere_measure() const { return omega_n_; }

  /// Coordinate of a node along a lattice axis (radial: the radius).
  double coord(int node, int axis) const;
  /// Quadrature weight of a node (its control volume).
  double node_volume(int node) const { return volume_[static_cast<size_t>(node)]; }
  const std::vector<double>& node_volumes() const { return volume_; }
  double measure() const { return measure_; }
  double diameter() const { return diameter_; }
  double min_spacing() const { return min_spacing_; }

  const GridSpec& spec() const { return spec_; }
  /// Structured-text metadata block (one "# key: value" line per entry).
  std::string header_block() const;

 private:
  explicit Grid(const GridSpec& spec) : spec_(spec) {}
  GridSpec spec_;
  std::array<double, 2> h_{0.0, 0.0};
  std::vector<double> r_;       // radial nodes
  std::vector<double> volume_;  // per-node quadrature weight
  double omega_n_ = 0.0;
  double measure_ = 0.0;
  double diameter_ = 0.0;
  double min_spacing_ = 0.0;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Nodal values on a grid.  Public operations keep values finite and throw
/// std::runtime_error otherwise.
struct ScalarField {
  GridPtr grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(GridPtr g, double fill = 0.0)
      : grid(std::move(g)), v(static_cast<size_t>(grid->num_nodes()), fill) {}

  int size() const { return static_cast<int>(v.size()); }
  double& operator[](int i) { return v[static_cast<size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<size_t>(i)]; }

  double max() const;
  double min() const;
  void check_finite(const char* what) const;
};

ScalarField constant_field(const GridPtr& grid, double value);
/// f receives the node coordinates: (x, 0) / (x, y) on rectangles, (r, 0) radial.
template <typename F>
ScalarField field_from(const GridPtr& grid, F&& f) {
  ScalarField out(grid);
  const int axes = grid->axes();
  for (int n = 0; n < grid->num_nodes(); ++n) {
    const double a = grid->coord(n, 0);
    const double b = axes > 1 ? grid->coord(n, 1) : 0.0;
    out[n] = f(a, b);
  }
  out.check_finite("field_from");
  return out;
}

/// One value per node per lattice axis (radial: the radial derivative).
struct VectorField {
  GridPtr grid;
  std::array<std::vector<double>, 2> comp;

  double magnitude_sq(int node) const {
    double s = comp[0][static_cast<size_t>(node)] * comp[0][static_cast<size_t>(node)];
    if (!comp[1].empty()) {
      s += comp[1][static_cast<size_t>(node)] * comp[1][static_cast<size_t>(node)];
    }
    return s;
  }
};

/// Symmetric second-derivative data per node.
///   rectangle dim 1: xx;  rectangle dim 2: xx, yy, xy;
///   radial: u_rr and u_r/r, the two eigenvalues of the Hessian of a radial
///   function (multiplicities 1 and dim-1).
struct HessianField {
  GridPtr grid;
  std::vector<double> xx, yy, xy;  // rectangle entries
  std::vector<double> rr, tt;      // radial entries

  double frobenius_sq(int node) const;
};

/// Centered second-order differences at interior nodes; boundary nodes fold in
/// the homogeneous Neumann condition through ghost reflection (the normal
/// derivative vanishes there).
VectorField gradient(const ScalarField& u);

/// Compact second-difference stencils, shifted inward at boundary rows so that
/// affine fields give the zero matrix and quadratics are exact everywhere.
HessianField hessian(const ScalarField& u);

/// Derivative estimates for norm evaluation: centered second-order stencils at
/// interior nodes and one-sided second-order stencils at boundary nodes (no
/// boundary condition is folded in, unlike gradient()).
VectorField nodal_derivatives(const ScalarField& u);

/// Pointwise evaluation of div((|grad u|^2 + eps^2)^((p-2)/2) grad u) from
/// staggered face fluxes; on radial grids the form
/// (1/r^(N-1)) d/dr (r^(N-1) Phi(u') u').  Boundary nodes use one-sided
/// differences of the adjacent face fluxes, so fields with constant gradient
/// map to the zero field.
ScalarField p_flux_divergence(const ScalarField& u, double p, double eps);

double integrate(const ScalarField& w);

/// Restriction to the inner region Omega_h = {x : dist(x, boundary) >= h}
/// together with the values of u shifted by h along one axis.  h must be a
/// whole number of cells; rectangle grids only (radial grids are graded, and
/// norm code resamples them to a uniform auxiliary grid instead).
struct ShiftRestrict {
  int axis = 0;
  int cells = 0;
  double h = 0.0;
  std::array<int, 2> lo{0, 0};  // inclusive node-index box of Omega_h
  std::array<int, 2> hi{0, 0};
  std::vector<double> shifted;  // full-size array; valid on the box
  double mask_measure = 0.0;

  bool contains(int i, int j) const {
    return i >= lo[0] && i <= hi[0] && j >= lo[1] && j <= hi[1];
  }
};

ShiftRestrict shift_restrict(const ScalarField& u, int axis, int cells);

/// Quadrature of w over the inner box of a ShiftRestrict (trapezoid weights of
/// the sub-box, so that the measure of the mask itself is exact).
double integrate_masked(const ScalarField& w, const ShiftRestrict& mask);

/// v_plus = min(u_+, m), v_minus = min(u_-, m); m = +inf gives the plain parts.
std::pair<ScalarField, ScalarField> truncate_parts(const ScalarField& u, double m);

}  // namespace pkirch

#endif  // PKIRCH_GRID_HPP
