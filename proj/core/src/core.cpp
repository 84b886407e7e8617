#include "mfg/core.hpp"

#include <algorithm>
#include <cmath>

namespace mfg {

ProblemParams derive_params(int n, double gamma, double C_H, AlphaSpec alpha,
                            double M) {
  if (n < 1 || n > 3) throw SpecError("derive_params: n must be 1, 2 or 3");
  if (!(gamma > 1.0)) throw SpecError("derive_params: gamma must be > 1");
  if (!(C_H > 0.0)) throw SpecError("derive_params: C_H must be > 0");
  if (!(M > 0.0)) throw SpecError("derive_params: M must be > 0");

  ProblemParams p;
  p.n = n;
  p.gamma = gamma;
  p.C_H = C_H;
  p.M = M;
  p.gamma_prime = gamma / (gamma - 1.0);
  if (!(p.gamma_prime < static_cast<double>(n)))
    throw SpecError("derive_params: standing assumption gamma' < n violated");
  p.C_L = (1.0 / p.gamma_prime) * std::pow(gamma * C_H, 1.0 / (1.0 - gamma));
  p.q_hat = n / (n - p.gamma_prime + 1.0);

  const double a_star = n - p.gamma_prime;
  p.alpha = alpha.critical ? a_star : alpha.value;
  if (p.alpha < a_star - 1e-12 || p.alpha >= static_cast<double>(n))
    throw SpecError("derive_params: alpha must lie in [n - gamma', n)");
  if (p.alpha < a_star) p.alpha = a_star;  // clamp roundoff below critical

  p.outside_paper_scope = (n == 1);
  return p;
}

Grid::Grid(int n_, int N_, double L_) : n(n_), N(N_), L(L_), h(L_ / N_) {
  if (n < 1 || n > 3) throw SpecError("Grid: n must be 1, 2 or 3");
  if (N < 8 || (N & (N - 1)) != 0)
    throw SpecError("Grid: N must be a power of two >= 8");
  if (!(L > 0.0)) throw SpecError("Grid: L must be > 0");
}

double PotentialSpec::operator()(const Point& x, int n) const {
  if (wells.empty()) return constant;
  double best = 0.0;
  bool first = true;
  for (const Well& w : wells) {
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const double d = x[a] - w.P[a];
      r2 += d * d;
    }
    const double v = w.a * std::pow(std::sqrt(r2), w.q);
    if (first || v < best) {
      best = v;
      first = false;
    }
  }
  return best + constant;
}

void validate_potential(const PotentialSpec& spec, const Grid& grid) {
  for (const Well& w : spec.wells) {
    if (!(w.a > 0.0)) throw SpecError("PotentialSpec: well amplitude a <= 0");
    if (!(w.q > 0.0)) throw SpecError("PotentialSpec: well exponent q <= 0");
    for (int a = 0; a < grid.n; ++a) {
      if (!(w.P[a] > -grid.L / 2 && w.P[a] < grid.L / 2))
        throw SpecError("PotentialSpec: well center outside the box");
    }
  }
  if (spec.constant < 0.0)
    throw SpecError("PotentialSpec: additive constant < 0");
}

DensityField eval_potential(const PotentialSpec& spec, const Grid& grid) {
  validate_potential(spec, grid);
  DensityField V(grid);
  const std::size_t sz = grid.size();
  for (std::size_t i = 0; i < sz; ++i) V.values[i] = spec(grid.node(i), grid.n);
  return V;
}

std::pair<DensityField, FluxField> seed_pair(const Grid& grid, double M) {
  return seed_pair_at(grid, M, Point{0.0, 0.0, 0.0}, 1.0);
}

std::pair<DensityField, FluxField> seed_pair_at(const Grid& grid, double M,
                                                const Point& x0, double sigma) {
  DensityField m(grid);
  FluxField w(grid);
  const std::size_t sz = grid.size();
  double total = 0.0;
  for (std::size_t i = 0; i < sz; ++i) {
    const Point x = grid.node(i);
    double r2 = 0.0;
    for (int a = 0; a < grid.n; ++a) {
      const double d = x[a] - x0[a];
      r2 += d * d;
    }
    const double r = std::sqrt(r2);
    const double v = std::exp(-r / sigma);
    m.values[i] = v;
    total += v;
    if (r > 0.0) {
      for (int a = 0; a < grid.n; ++a)
        w.component(a)[i] = -(x[a] - x0[a]) / (r * sigma) * v;
    }
    // w(x0) stays 0: the radial singularity is removable by symmetry.
  }
  const double c = M / (total * grid.cell_volume());
  for (double& v : m.values) v *= c;
  for (double& v : w.values) v *= c;
  return {std::move(m), std::move(w)};
}

double mass(const DensityField& m) {
  double s = 0.0;
  for (double v : m.values) s += v;
  return s * m.grid.cell_volume();
}

std::size_t argmax_cell(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;  // strict: ties keep the lowest index
  return best;
}

std::size_t argmin_cell(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[best]) best = i;
  return best;
}

}  // namespace mfg
