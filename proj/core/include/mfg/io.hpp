#ifndef MFG_IO_HPP
#define MFG_IO_HPP

#include <string>
#include <vector>

#include "mfg/core.hpp"

namespace mfg {

/// Field dump format: one text header line "GRID n N L fieldkind\n",
/// then 64-bit little-endian floats, row-major. Flux files hold n
/// consecutive component blocks. Bit-exact round trips.
void write_field(const std::string& path, const Grid& grid,
                 const std::vector<double>& values, const std::string& kind);

struct LoadedField {
  Grid grid;
  std::vector<double> values;
  std::string kind;
};

LoadedField read_field(const std::string& path);

void write_density(const std::string& path, const DensityField& m);
void write_flux(const std::string& path, const FluxField& w);
void write_value(const std::string& path, const ValueFunction& u);
DensityField read_density(const std::string& path);
FluxField read_flux(const std::string& path);
ValueFunction read_value(const std::string& path);

/// Radial profile about the argmax of m: bins of width h, columns
/// r, m_mean, u_mean, count.
void write_radial_profile(const std::string& path, const DensityField& m,
                          const ValueFunction& u);

}  // namespace mfg

#endif
