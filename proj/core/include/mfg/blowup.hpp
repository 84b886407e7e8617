#ifndef MFG_BLOWUP_HPP
#define MFG_BLOWUP_HPP

#include <vector>

#include "mfg/core.hpp"
#include "mfg/identities.hpp"
#include "mfg/solver.hpp"

namespace mfg {

/// One converged solve of the M-sweep toward the critical mass.
struct BlowupRecord {
  double M = 0.0;
  double M_ratio = 0.0;       // M / M*-hat
  double epsilon = 0.0;       // kinetic^{-1/g'}
  double energy = 0.0;        // total energy at the minimizer
  double lambda = 0.0;
  Point x_eps{0, 0, 0};       // argmin u
  Point x_bar_eps{0, 0, 0};   // argmax m
  double separation = 0.0;    // |x_bar - x_eps| / eps
  bool converged = false;
  double gamma_prime = 0.0;
};

struct SweepResult {
  std::vector<BlowupRecord> records;
  std::vector<GroundState> states;  // aligned with records
  double M_star_hat = 0.0;
};

/// Warm-started continuation over M = ratio * M*-hat, ratios ascending in
/// (0,1). Per-record convergence failures are recorded and the sweep
/// continues. M_star_hat == 0 estimates the critical mass internally.
SweepResult sweep_mass(const ProblemParams& p, const Grid& grid,
                       const PotentialSpec& V,
                       const std::vector<double>& ratios,
                       const SolverConfig& cfg, double M_star_hat = 0.0,
                       const GroundState* gamma_state = nullptr);

/// Blow-up rescaling m_e = e^n m(ex + x_e), w_e = e^{n+1} w(ex + x_e),
/// u_e = e^{(2-g)/(g-1)} u(ex + x_e), band-limited resampling on the same
/// grid. The rescaled pair has kinetic term 1 up to interpolation error.
struct Rescaled {
  DensityField m;
  FluxField w;
  ValueFunction u;
  double epsilon = 0.0;
  Point x_eps{0, 0, 0};
  bool out_of_box = false;
};

Rescaled rescale(const GroundState& state, const ProblemParams& p);

struct ExponentFit {
  double eps_slope = 0.0;
  double eps_slope_predicted = 0.0;     // 1/(g'+q)
  double eps_prefactor = 0.0;
  double eps_prefactor_predicted = 0.0;  // (g'/(q mu))^{1/(g'+q)}
  double energy_slope = 0.0;
  double energy_slope_predicted = 0.0;  // q/(g'+q)
  double energy_prefactor = 0.0;
  double energy_prefactor_predicted = 0.0;
  int n_used = 0;
  bool ok = false;
};

/// Log-log least squares of eps and energy against (1 - M/M*). Records with
/// eps < min_epsilon or failed convergence are excluded; needs >= 5 points.
ExponentFit fit_exponents(const std::vector<BlowupRecord>& records,
                          double gamma_prime, double q, double mu,
                          double min_epsilon = 0.0);

struct WellAnalysis {
  double mu_i = 0.0;  // min_y int a_i |x+y|^{q_i} m0 dx
  Point y_i{0, 0, 0};
};

struct FlattestZeroAnalysis {
  std::vector<WellAnalysis> wells;
  double q = 0.0;   // max well exponent
  double mu = 0.0;  // min mu_i over Z
  std::vector<int> Z;   // wells with q_i == q
  std::vector<int> Z0;  // wells in Z with mu_i == mu
};

/// H_i evaluated by free-space convolution of m0 with a_i |.|^{q_i} on the
/// field grid, minimized by exhaustive scan plus local quadratic refinement.
/// m0 is a potential-free ratio minimizer under the Thm-1.1 normalization.
FlattestZeroAnalysis flattest_zero(const PotentialSpec& V,
                                   const DensityField& m0);

struct ConcentrationReport {
  int selected_well = -1;      // index into V.wells of the nearest Z0 well
  double distance = 0.0;       // |x_eps - P| for that well
  Point y0_offset{0, 0, 0};    // (x_eps - P)/eps at the largest ratio
  Point y0_predicted{0, 0, 0};
  double ratio_used = 0.0;
  bool pass = false;
};

/// Asserts the largest-ratio record concentrates within distance d of some
/// Z0 well and reports the rescaled offset against the H_i minimizer.
ConcentrationReport concentration_check(const std::vector<BlowupRecord>& records,
                                        const FlattestZeroAnalysis& analysis,
                                        const PotentialSpec& V, double d);

}  // namespace mfg

#endif
