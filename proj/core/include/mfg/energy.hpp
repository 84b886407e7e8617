#ifndef MFG_ENERGY_HPP
#define MFG_ENERGY_HPP

#include "mfg/core.hpp"
#include "mfg/riesz.hpp"

namespace mfg {

/// Floors realizing the L(0,0) = 0 / +infinity convention of the kinetic
/// integrand without NaNs.
struct Floors {
  double m = 0.0;
  double w = 0.0;
};

Floors floors_for(const ProblemParams& p, const Grid& g);

/// Kinetic term with the perspective-function convention: cells with
/// m <= m_floor contribute 0 when |w| <= w_floor and raise the overflow
/// flag otherwise. Callers must reject overflowed states.
struct KineticResult {
  double value = 0.0;
  bool overflow = false;
};

KineticResult kinetic_term(const DensityField& m, const FluxField& w,
                           const ProblemParams& p);

struct EnergyBreakdown {
  double kinetic = 0.0;
  double potential = 0.0;
  double interaction = 0.0;
  double total = 0.0;  // kinetic + potential - interaction/2, exactly
  double mass = 0.0;
  bool kinetic_overflow = false;
};

double potential_energy(const DensityField& m, const DensityField* V);

/// V may be null for the potential-free energy.
EnergyBreakdown total_energy(const DensityField& m, const FluxField& w,
                             const DensityField* V, const RieszKernel& kernel,
                             const ProblemParams& p);

/// Scale-invariant Gagliardo-Nirenberg ratio
/// G = kinetic^{(n-a)/g'} mass^{(2g'+a-n)/g'} / interaction.
double gn_ratio(const DensityField& m, const FluxField& w,
                const RieszKernel& kernel, const ProblemParams& p);

/// First variation of the energy:
///   dE/dm = -(g'-1) C_L |w/m|^{g'} + V - K*m
///   dE/dw = g' C_L |w/m|^{g'-2} (w/m)
/// conv is the precomputed K*m field.
struct EnergyGradient {
  DensityField dm;
  FluxField dw;
  bool overflow = false;
};

EnergyGradient energy_gradient(const DensityField& m, const FluxField& w,
                               const DensityField* V, const DensityField& conv,
                               const ProblemParams& p);
EnergyGradient energy_gradient(const DensityField& m, const FluxField& w,
                               const DensityField* V, const RieszKernel& kernel,
                               const ProblemParams& p);

/// Least-squares projection of w onto the Fokker-Planck constraint
/// div w = lap m: returns w + grad chi with lap chi = lap m - div w.
FluxField project_fp(const DensityField& m, const FluxField& w);

/// Relative spectral residual |lap m - div w|_2 / |lap m|_2.
double fp_residual(const DensityField& m, const FluxField& w);

/// Clip at the mass floor and rescale so the discrete mass is exactly M.
DensityField renormalize_mass(const DensityField& m, double M);

}  // namespace mfg

#endif
