#include "pkirch/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace pkirch {

std::string format_float(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_field_csv(const std::filesystem::path& path, const ScalarField& u) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_field_csv: cannot open " + path.string());
  }
  const Grid& g = *u.grid;
  out << g.header_block();
  if (g.kind() == GridKind::radial_ball) {
    out << "r,value\n";
    for (int i = 0; i < g.num_nodes(); ++i) {
      out << format_float(g.coord(i, 0)) << "," << format_float(u[i]) << "\n";
    }
  } else if (g.dim() == 1) {
    out << "x,value\n";
    for (int i = 0; i < g.num_nodes(); ++i) {
      out << format_float(g.coord(i, 0)) << "," << format_float(u[i]) << "\n";
    }
  } else {
    out << "x,y,value\n";
    for (int i = 0; i < g.num_nodes(); ++i) {
      out << format_float(g.coord(i, 0)) << "," << format_float(g.coord(i, 1)) << ","
          << format_float(u[i]) << "\n";
    }
  }
  if (!out.good()) {
    throw std::runtime_error("write_field_csv: write failed for " + path.string());
  }
}

}  // namespace pkirch
