#ifndef MFG_CORE_HPP
#define MFG_CORE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mfg {

using Point = std::array<double, 3>;

/// Exponents and physical constants of the ergodic MFG system.
///
/// Derived quantities (gamma_prime, C_L, q_hat) are always recomputed from
/// (gamma, C_H) so that re-deriving from an instance's own fields is bitwise
/// idempotent.
struct ProblemParams {
  int n = 2;                  // spatial dimension
  double gamma = 2.0;         // Hamiltonian exponent, > 1
  double gamma_prime = 2.0;   // conjugate exponent gamma/(gamma-1)
  double C_H = 1.0;           // Hamiltonian constant
  double C_L = 0.25;          // Lagrangian constant, (1/g')(g C_H)^{1/(1-g)}
  double alpha = 1.0;         // Riesz order, in [n - gamma', n)
  double M = 1.0;             // total mass
  double q_hat = 0.0;         // diagnostic Sobolev index n/(n - gamma' + 1)
  bool outside_paper_scope = false;  // set for n == 1 smoke-test mode

  bool alpha_is_critical(double tol = 1e-12) const {
    return std::abs(alpha - (n - gamma_prime)) <= tol;
  }
  double critical_alpha() const { return n - gamma_prime; }
};

/// Riesz order given either as a number or as the critical token.
struct AlphaSpec {
  bool critical = false;
  double value = 0.0;
  static AlphaSpec Critical() { return {true, 0.0}; }
  static AlphaSpec Value(double a) { return {false, a}; }
};

ProblemParams derive_params(int n, double gamma, double C_H, AlphaSpec alpha,
                            double M);

/// Uniform periodic box [-L/2, L/2)^n with the origin on a grid node.
struct Grid {
  int n = 2;       // dimension, 1..3
  int N = 64;      // cells per axis, power of two, >= 8
  double L = 16.0; // box side length
  double h = 0.25; // spacing L/N

  Grid() = default;
  Grid(int n_, int N_, double L_);

  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < n; ++a) s *= static_cast<std::size_t>(N);
    return s;
  }
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < n; ++a) v *= h;
    return v;
  }
  /// Node coordinate along one axis; coord(N/2) == 0 exactly.
  double coord(int i) const { return (i - N / 2) * h; }

  /// Decompose a flat row-major index into per-axis indices.
  void unflatten(std::size_t idx, int out[3]) const {
    out[0] = out[1] = out[2] = 0;
    for (int a = n - 1; a >= 0; --a) {
      out[a] = static_cast<int>(idx % static_cast<std::size_t>(N));
      idx /= static_cast<std::size_t>(N);
    }
  }
  std::size_t flatten(const int ix[3]) const {
    std::size_t idx = 0;
    for (int a = 0; a < n; ++a)
      idx = idx * static_cast<std::size_t>(N) + static_cast<std::size_t>(ix[a]);
    return idx;
  }
  Point node(std::size_t idx) const {
    int ix[3];
    unflatten(idx, ix);
    Point p{0.0, 0.0, 0.0};
    for (int a = 0; a < n; ++a) p[a] = coord(ix[a]);
    return p;
  }

  bool operator==(const Grid& o) const {
    return n == o.n && N == o.N && L == o.L;
  }
};

/// Scalar nonnegative density on a grid.
struct DensityField {
  Grid grid;
  std::vector<double> values;

  DensityField() = default;
  explicit DensityField(const Grid& g) : grid(g), values(g.size(), 0.0) {}
};

/// n-vector flux per cell; component-major layout (c * size + idx).
struct FluxField {
  Grid grid;
  std::vector<double> values;

  FluxField() = default;
  explicit FluxField(const Grid& g)
      : grid(g), values(static_cast<std::size_t>(g.n) * g.size(), 0.0) {}

  double* component(int c) { return values.data() + c * grid.size(); }
  const double* component(int c) const {
    return values.data() + c * grid.size();
  }
};

/// Value function; normalized so the value at its argmin cell is exactly 0.
struct ValueFunction {
  Grid grid;
  std::vector<double> values;

  ValueFunction() = default;
  explicit ValueFunction(const Grid& g) : grid(g), values(g.size(), 0.0) {}
};

/// One polynomial well a|x - P|^q.
struct Well {
  double a = 1.0;
  Point P{0.0, 0.0, 0.0};
  double q = 2.0;
};

/// Potential with l distinct zeros P_i and local expansion a_i|x-P_i|^{q_i}.
/// Evaluated as min_i a_i|x-P_i|^{q_i} + constant so that V(P_i) = constant
/// and the local expansion is exact near each well. The growth constants
/// (b, delta, K, C-bar) constraining V at infinity are vacuous on the
/// truncated box and are not represented.
struct PotentialSpec {
  std::vector<Well> wells;
  double constant = 0.0;

  bool empty() const { return wells.empty() && constant == 0.0; }
  double operator()(const Point& x, int n) const;
};

void validate_potential(const PotentialSpec& spec, const Grid& grid);

/// Sample V on grid nodes. Exact at nodes; V >= 0 everywhere.
DensityField eval_potential(const PotentialSpec& spec, const Grid& grid);

/// The exponential seed pair m = c e^{-|x|}, w = grad m, mass exactly M.
std::pair<DensityField, FluxField> seed_pair(const Grid& grid, double M);

/// Like seed_pair but centered at x0 with length scale sigma.
std::pair<DensityField, FluxField> seed_pair_at(const Grid& grid, double M,
                                                const Point& x0, double sigma);

double mass(const DensityField& m);
std::size_t argmax_cell(const std::vector<double>& v);
std::size_t argmin_cell(const std::vector<double>& v);

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mfg

#endif
