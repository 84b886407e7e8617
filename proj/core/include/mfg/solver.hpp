#ifndef MFG_SOLVER_HPP
#define MFG_SOLVER_HPP

#include <cstdint>
#include <utility>

#include "mfg/core.hpp"
#include "mfg/energy.hpp"
#include "mfg/riesz.hpp"

namespace mfg {

struct SolverConfig {
  int max_iters = 20000;
  double tol_energy = 1e-9;  // relative energy change, 10 consecutive steps
  double tol_grad = 1e-6;    // projected-gradient norm, relative to first
  double backtrack = 0.5;    // line-search shrink factor, in (0,1)
  double step0 = 0.0;        // initial step; 0 picks a scale automatically
  double step_growth = 1.8;  // growth after an accepted first-try step
  int restarts = 1;          // multistart count
  int threads = 1;           // concurrent restarts
  std::uint64_t seed = 1;    // RNG seed for multistart perturbations
  double unbounded_floor = 0.0;   // absolute energy floor; 0 = relative rule
  double kinetic_growth = 10.0;   // kinetic blow-up factor for the detector
};

enum class SolveStatus { Converged, NonConverged, UnboundedSuspected };

struct Residuals {
  double fp = 0.0;         // |lap m - div w| / |lap m|, spectral
  double hjb = 0.0;        // HJB residual with the recovered u
  double pohozaev1 = 0.0;  // lambda M vs -((a+2g'-n)/2g') interaction
  double pohozaev2 = 0.0;  // kinetic vs ((n-a)/2g') interaction
};

struct GroundState {
  DensityField m;
  FluxField w;
  ValueFunction u;
  double lambda = 0.0;
  EnergyBreakdown breakdown;
  Residuals residuals;
  double curl_residual = 0.0;  // |g - grad u| / |g| of the duality field
  bool converged = false;
  SolveStatus status = SolveStatus::NonConverged;
  int iterations = 0;
  double boundary_mass_ratio = 0.0;  // max m on box faces / max m
};

/// Projected-gradient minimization of E over K_M: descent on (m, w) with
/// backtracking, then mass renormalization and Fokker-Planck projection.
/// Accepted energies are nonincreasing. Multistart returns the lowest-energy
/// converged state.
GroundState minimize_energy(const ProblemParams& p, const Grid& grid,
                            const PotentialSpec& V, const SolverConfig& cfg);

/// Warm-started variant; m0/w0 override the seeds (restarts are ignored).
GroundState minimize_energy(const ProblemParams& p, const Grid& grid,
                            const PotentialSpec& V, const SolverConfig& cfg,
                            const DensityField& m0, const FluxField& w0);

/// Potential-free minimizer of E_0 at subcritical alpha; the translation
/// gauge recenters argmax(m) to the origin every iteration.
GroundState minimize_free(const ProblemParams& p, const Grid& grid,
                          const SolverConfig& cfg);

struct GammaEstimate {
  double gamma_hat = 0.0;
  bool converged = false;
  GroundState state;  // the normalized ratio minimizer (mass 1)
};

/// Minimizes the Gagliardo-Nirenberg ratio G_a; scale gauge fixed by mass-1
/// renormalization each iteration and occasional kinetic-1 dilations.
GammaEstimate estimate_gamma(const ProblemParams& p, const Grid& grid,
                             const SolverConfig& cfg);

/// M* estimate 2 Gamma_{a*}; requires params at the critical alpha.
double critical_mass(const ProblemParams& p, const Grid& grid,
                     const SolverConfig& cfg);

/// Recover the value function and ergodic constant from a converged pair:
/// u is the least-squares potential of the duality gradient field, pinned to
/// 0 at its argmin; lambda = (kinetic + potential - interaction)/M.
std::pair<ValueFunction, double> recover_u_lambda(
    const DensityField& m, const FluxField& w, const DensityField* V,
    const RieszKernel& kernel, const ProblemParams& p,
    double* curl_residual = nullptr);

/// (hjb, fp) relative L2 residuals of the PDE system for a full state.
std::pair<double, double> system_residuals(const GroundState& state,
                                           const DensityField* V,
                                           const RieszKernel& kernel,
                                           const ProblemParams& p);

/// Closed-form Fokker-Planck solution m = c exp(-2 C_H u) for gamma = 2.
DensityField gibbs_crosscheck(const ValueFunction& u, const ProblemParams& p);

/// Coefficient of the gamma'-Laplacian in the Schrodinger reduction.
double schrodinger_mu(const ProblemParams& p);

/// Relative residual of -mu lap_{g'} v + [-(K*m) + V - lambda] v^{g'-1}
/// with v = m^{1/g'}, masked where m <= 10 m_floor.
double schrodinger_residual(const DensityField& m, const DensityField* V,
                            double lambda, const RieszKernel& kernel,
                            const ProblemParams& p);

}  // namespace mfg

#endif
