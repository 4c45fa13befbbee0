#ifndef PKIRCH_RANDOM_FIELDS_HPP
#define PKIRCH_RANDOM_FIELDS_HPP

#include <cstdint>
#include <random>

#include "pkirch/grid.hpp"

namespace pkirch {

/// Deterministic uniform doubles from the standardized mt19937_64 stream
/// (library distributions are implementation-defined, so draws go through
/// this shim to keep runs bit-reproducible across platforms).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 eng_;
};

struct BumpSpec {
  int count = 6;
  double amplitude = 1.0;
  double width_lo = 0.08;  // fraction of the extent
  double width_hi = 0.25;
  double offset = 0.0;
};

/// Sum of Gaussian bumps with seeded centers, widths and signed amplitudes.
ScalarField random_bumps(const GridPtr& grid, std::uint64_t seed,
                         const BumpSpec& spec = {});

/// Nodewise uniform values in [lo, hi] (rough test data).
ScalarField random_nodal(const GridPtr& grid, std::uint64_t seed, double lo, double hi);

}  // namespace pkirch

#endif  // PKIRCH_RANDOM_FIELDS_HPP
