#include "pkirch/random_fields.hpp"

#include <cmath>
#include <vector>

namespace pkirch {

ScalarField random_bumps(const GridPtr& grid, std::uint64_t seed, const BumpSpec& spec) {
  Rng rng(seed);
  struct Bump {
    double cx, cy, w, amp;
  };
  std::vector<Bump> bumps;
  const double ex = grid->extent(0);
  const double ey = grid->axes() > 1 ? grid->extent(1) : 0.0;
  const double scale = std::max(ex, ey);
  for (int k = 0; k < spec.count; ++k) {
    Bump b;
    b.cx = rng.uniform(0.0, ex);
    b.cy = grid->axes() > 1 ? rng.uniform(0.0, ey) : 0.0;
    b.w = scale * rng.uniform(spec.width_lo, spec.width_hi);
    b.amp = spec.amplitude * rng.uniform(-1.0, 1.0);
    bumps.push_back(b);
  }
  const double x0 = grid->kind() == GridKind::radial_ball ? grid->r_min() : 0.0;
  ScalarField out(grid, spec.offset);
  for (int n = 0; n < grid->num_nodes(); ++n) {
    const double x = grid->coord(n, 0) - x0;
    const double y = grid->axes() > 1 ? grid->coord(n, 1) : 0.0;
    for (const Bump& b : bumps) {
      const double dx = x - b.cx;
      const double dy = y - b.cy;
      out[n] += b.amp * std::exp(-0.5 * (dx * dx + dy * dy) / (b.w * b.w));
    }
  }
  out.check_finite("random_bumps");
  return out;
}

ScalarField random_nodal(const GridPtr& grid, std::uint64_t seed, double lo, double hi) {
  Rng rng(seed);
  ScalarField out(grid);
  for (int n = 0; n < grid->num_nodes(); ++n) {
    out[n] = rng.uniform(lo, hi);
  }
  return out;
}

}  // namespace pkirch
