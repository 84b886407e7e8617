#include "mfg/energy.hpp"

#include <cmath>

#include "mfg/fft.hpp"

namespace mfg {

Floors floors_for(const ProblemParams& p, const Grid& g) {
  double Ln = 1.0;
  for (int a = 0; a < g.n; ++a) Ln *= g.L;
  Floors f;
  f.m = 1e-12 * p.M / Ln;
  f.w = 1e-14 * p.M / (Ln * g.h);
  return f;
}

namespace {

double flux_norm(const FluxField& w, std::size_t i) {
  double s = 0.0;
  for (int a = 0; a < w.grid.n; ++a) {
    const double v = w.component(a)[i];
    s += v * v;
  }
  return std::sqrt(s);
}

}  // namespace

KineticResult kinetic_term(const DensityField& m, const FluxField& w,
                           const ProblemParams& p) {
  if (!(m.grid == w.grid))
    throw SpecError("kinetic_term: density and flux on different grids");
  const Floors fl = floors_for(p, m.grid);
  const double gp = p.gamma_prime;
  KineticResult res;
  double acc = 0.0;
  const std::size_t sz = m.grid.size();
  for (std::size_t i = 0; i < sz; ++i) {
    const double mi = m.values[i];
    const double wn = flux_norm(w, i);
    if (mi <= fl.m) {
      if (wn > fl.w) {
        res.overflow = true;
        break;
      }
      continue;  // L(0,0) = 0
    }
    acc += std::pow(wn, gp) / std::pow(mi, gp - 1.0);
  }
  res.value = res.overflow ? 0.0 : p.C_L * acc * m.grid.cell_volume();
  return res;
}

double potential_energy(const DensityField& m, const DensityField* V) {
  if (V == nullptr) return 0.0;
  if (!(m.grid == V->grid))
    throw SpecError("potential_energy: grid mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < m.values.size(); ++i)
    acc += m.values[i] * V->values[i];
  return acc * m.grid.cell_volume();
}

EnergyBreakdown total_energy(const DensityField& m, const FluxField& w,
                             const DensityField* V, const RieszKernel& kernel,
                             const ProblemParams& p) {
  EnergyBreakdown b;
  const KineticResult k = kinetic_term(m, w, p);
  b.kinetic = k.value;
  b.kinetic_overflow = k.overflow;
  b.potential = potential_energy(m, V);
  b.interaction = interaction_energy(kernel, m);
  b.mass = mass(m);
  b.total = b.kinetic + b.potential - b.interaction / 2.0;
  return b;
}

double gn_ratio(const DensityField& m, const FluxField& w,
                const RieszKernel& kernel, const ProblemParams& p) {
  const KineticResult k = kinetic_term(m, w, p);
  if (k.overflow) throw SpecError("gn_ratio: kinetic term is +infinity");
  const double inter = interaction_energy(kernel, m);
  if (!(inter > 0.0)) throw SpecError("gn_ratio: interaction must be > 0");
  const double M = mass(m);
  const double e1 = (p.n - p.alpha) / p.gamma_prime;
  const double e2 = (2.0 * p.gamma_prime + p.alpha - p.n) / p.gamma_prime;
  return std::pow(k.value, e1) * std::pow(M, e2) / inter;
}

EnergyGradient energy_gradient(const DensityField& m, const FluxField& w,
                               const DensityField* V, const DensityField& conv,
                               const ProblemParams& p) {
  const Floors fl = floors_for(p, m.grid);
  const double gp = p.gamma_prime;
  EnergyGradient g;
  g.dm = DensityField(m.grid);
  g.dw = FluxField(m.grid);
  const std::size_t sz = m.grid.size();
  for (std::size_t i = 0; i < sz; ++i) {
    const double mi = m.values[i];
    const double wn = flux_norm(w, i);
    double kin_dm = 0.0;
    double dw_scale = 0.0;  // multiplies w_a/m
    if (mi > fl.m) {
      const double ratio = wn / mi;
      kin_dm = -(gp - 1.0) * p.C_L * std::pow(ratio, gp);
      if (wn > 0.0)
        dw_scale = gp * p.C_L * std::pow(ratio, gp - 1.0) / wn;
    } else if (wn > fl.w) {
      g.overflow = true;
    }
    g.dm.values[i] = kin_dm + (V ? V->values[i] : 0.0) - conv.values[i];
    if (dw_scale != 0.0) {
      for (int a = 0; a < m.grid.n; ++a)
        g.dw.component(a)[i] = dw_scale * w.component(a)[i];
    }
  }
  return g;
}

EnergyGradient energy_gradient(const DensityField& m, const FluxField& w,
                               const DensityField* V, const RieszKernel& kernel,
                               const ProblemParams& p) {
  const DensityField conv = convolve(kernel, m);
  return energy_gradient(m, w, V, conv, p);
}

FluxField project_fp(const DensityField& m, const FluxField& w) {
  if (!(m.grid == w.grid)) throw SpecError("project_fp: grid mismatch");
  Spectral& sp = Spectral::for_grid(m.grid);
  std::vector<double> lap, div;
  sp.laplacian(m.values, lap);
  sp.divergence(w, div);
  for (std::size_t i = 0; i < lap.size(); ++i) lap[i] -= div[i];
  FluxField out = w;
  sp.add_gradient_of_poisson(lap, out);
  return out;
}

double fp_residual(const DensityField& m, const FluxField& w) {
  Spectral& sp = Spectral::for_grid(m.grid);
  std::vector<double> lap, div;
  sp.laplacian(m.values, lap);
  sp.divergence(w, div);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < lap.size(); ++i) {
    const double d = lap[i] - div[i];
    num += d * d;
    den += lap[i] * lap[i];
  }
  return (den > 0.0) ? std::sqrt(num / den) : std::sqrt(num);
}

DensityField renormalize_mass(const DensityField& m, double M) {
  double Ln = 1.0;
  for (int a = 0; a < m.grid.n; ++a) Ln *= m.grid.L;
  const double m_floor = 1e-12 * M / Ln;

  DensityField out(m.grid);
  double total = 0.0;
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    const double v = std::max(m.values[i], m_floor);
    out.values[i] = v;
    total += v;
  }
  total *= m.grid.cell_volume();
  if (!(total > 0.0))
    throw SpecError("renormalize_mass: density has no positive part");
  const double c = M / total;
  if (c != 1.0)
    for (double& v : out.values) v *= c;
  return out;
}

}  // namespace mfg
