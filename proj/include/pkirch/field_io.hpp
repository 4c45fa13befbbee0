#ifndef PKIRCH_FIELD_IO_HPP
#define PKIRCH_FIELD_IO_HPP

#include <filesystem>
#include <string>

#include "pkirch/grid.hpp"

namespace pkirch {

/// "%.17g" — every float in the CSV outputs carries 17 significant digits.
std::string format_float(double x);

/// Field CSV: grid metadata header block, then one row per node
/// ("x,value" / "x,y,value" / "r,value").
void write_field_csv(const std::filesystem::path& path, const ScalarField& u);

}  // namespace pkirch

#endif  // PKIRCH_FIELD_IO_HPP
