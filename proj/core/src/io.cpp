#include "mfg/io.hpp"

#include <bit>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mfg {

static_assert(std::endian::native == std::endian::little,
              "field dumps are little-endian; big-endian hosts unsupported");

void write_field(const std::string& path, const Grid& grid,
                 const std::vector<double>& values, const std::string& kind) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw SpecError("write_field: cannot open " + path);
  char header[128];
  std::snprintf(header, sizeof(header), "GRID %d %d %.17g %s\n", grid.n,
                grid.N, grid.L, kind.c_str());
  f.write(header, static_cast<std::streamsize>(std::strlen(header)));
  f.write(reinterpret_cast<const char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!f) throw SpecError("write_field: short write to " + path);
}

LoadedField read_field(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SpecError("read_field: cannot open " + path);
  std::string header;
  std::getline(f, header);
  std::istringstream hs(header);
  std::string tag;
  int n = 0, N = 0;
  double L = 0.0;
  std::string kind;
  hs >> tag >> n >> N >> L >> kind;
  if (tag != "GRID" || !hs)
    throw SpecError("read_field: malformed header in " + path);

  LoadedField out;
  out.grid = Grid(n, N, L);
  out.kind = kind;
  std::size_t count = out.grid.size();
  if (kind == "flux") count *= static_cast<std::size_t>(n);
  out.values.resize(count);
  f.read(reinterpret_cast<char*>(out.values.data()),
         static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<std::size_t>(f.gcount()) != count * sizeof(double))
    throw SpecError("read_field: truncated payload in " + path);
  return out;
}

void write_density(const std::string& path, const DensityField& m) {
  write_field(path, m.grid, m.values, "density");
}

void write_flux(const std::string& path, const FluxField& w) {
  write_field(path, w.grid, w.values, "flux");
}

void write_value(const std::string& path, const ValueFunction& u) {
  write_field(path, u.grid, u.values, "value");
}

DensityField read_density(const std::string& path) {
  LoadedField lf = read_field(path);
  if (lf.kind != "density")
    throw SpecError("read_density: field kind is " + lf.kind);
  DensityField m(lf.grid);
  m.values = std::move(lf.values);
  return m;
}

FluxField read_flux(const std::string& path) {
  LoadedField lf = read_field(path);
  if (lf.kind != "flux") throw SpecError("read_flux: field kind is " + lf.kind);
  FluxField w(lf.grid);
  w.values = std::move(lf.values);
  return w;
}

ValueFunction read_value(const std::string& path) {
  LoadedField lf = read_field(path);
  if (lf.kind != "value")
    throw SpecError("read_value: field kind is " + lf.kind);
  ValueFunction u(lf.grid);
  u.values = std::move(lf.values);
  return u;
}

void write_radial_profile(const std::string& path, const DensityField& m,
                          const ValueFunction& u) {
  const Grid& g = m.grid;
  const std::size_t peak = argmax_cell(m.values);
  int pk[3];
  g.unflatten(peak, pk);

  const int nbins = g.N / 2;
  std::vector<double> msum(nbins, 0.0), usum(nbins, 0.0);
  std::vector<int> count(nbins, 0);
  int ix[3];
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    g.unflatten(i, ix);
    double r2 = 0.0;
    for (int a = 0; a < g.n; ++a) {
      int d = ix[a] - pk[a];
      if (d > g.N / 2) d -= g.N;
      if (d < -g.N / 2) d += g.N;
      r2 += (d * g.h) * (d * g.h);
    }
    const int bin = static_cast<int>(std::sqrt(r2) / g.h);
    if (bin >= nbins) continue;
    msum[bin] += m.values[i];
    usum[bin] += u.values[i];
    count[bin] += 1;
  }

  std::ofstream f(path);
  if (!f) throw SpecError("write_radial_profile: cannot open " + path);
  f << "r,m_mean,u_mean,count\n";
  char line[160];
  for (int b = 0; b < nbins; ++b) {
    if (count[b] == 0) continue;
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%d\n", b * g.h,
                  msum[b] / count[b], usum[b] / count[b], count[b]);
    f << line;
  }
}

}  // namespace mfg
