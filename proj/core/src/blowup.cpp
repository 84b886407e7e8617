#include "mfg/blowup.hpp"

#include <algorithm>
#include <cmath>

#include "mfg/energy.hpp"
#include "mfg/fft.hpp"
#include "mfg/resample.hpp"

namespace mfg {

namespace {

BlowupRecord record_of(const GroundState& s, double M, double M_star,
                       const ProblemParams& p) {
  BlowupRecord r;
  r.M = M;
  r.M_ratio = M / M_star;
  r.gamma_prime = p.gamma_prime;
  r.energy = s.breakdown.total;
  r.lambda = s.lambda;
  r.converged = s.converged;
  const double kin = s.breakdown.kinetic;
  r.epsilon = (kin > 0.0) ? std::pow(kin, -1.0 / p.gamma_prime) : 0.0;
  r.x_eps = s.m.grid.node(argmin_cell(s.u.values));
  r.x_bar_eps = s.m.grid.node(argmax_cell(s.m.values));
  double d2 = 0.0;
  for (int a = 0; a < s.m.grid.n; ++a) {
    const double d = r.x_bar_eps[a] - r.x_eps[a];
    d2 += d * d;
  }
  r.separation = (r.epsilon > 0.0) ? std::sqrt(d2) / r.epsilon : 0.0;
  return r;
}

}  // namespace

SweepResult sweep_mass(const ProblemParams& p, const Grid& grid,
                       const PotentialSpec& V,
                       const std::vector<double>& ratios,
                       const SolverConfig& cfg, double M_star_hat,
                       const GroundState* gamma_state) {
  for (double r : ratios) {
    if (!(r > 0.0 && r < 1.0))
      throw SpecError("sweep_mass: ratios must lie in (0,1)");
  }
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());

  SweepResult out;
  out.M_star_hat =
      (M_star_hat > 0.0) ? M_star_hat : critical_mass(p, grid, cfg);

  const GroundState* prev = nullptr;
  for (double ratio : sorted) {
    ProblemParams pr = p;
    pr.M = ratio * out.M_star_hat;

    GroundState s;
    if (prev != nullptr && prev->converged) {
      // Continuation: rescale the previous minimizer to the new mass.
      DensityField m0 = prev->m;
      FluxField w0 = prev->w;
      const double c = pr.M / mass(m0);
      for (double& v : m0.values) v *= c;
      for (double& v : w0.values) v *= c;
      s = minimize_energy(pr, grid, V, cfg, m0, w0);
    } else if (gamma_state != nullptr) {
      // Seed from the rescaled ratio minimizer, centered at the first well.
      DensityField m0 = gamma_state->m;
      FluxField w0 = gamma_state->w;
      const double c = pr.M / mass(m0);
      for (double& v : m0.values) v *= c;
      for (double& v : w0.values) v *= c;
      s = minimize_energy(pr, grid, V, cfg, m0, w0);
    } else {
      s = minimize_energy(pr, grid, V, cfg);
    }

    out.records.push_back(record_of(s, pr.M, out.M_star_hat, pr));
    out.states.push_back(std::move(s));
    prev = &out.states.back();
  }
  return out;
}

Rescaled rescale(const GroundState& state, const ProblemParams& p) {
  const Grid& g = state.m.grid;
  Rescaled out;
  const double kin = state.breakdown.kinetic;
  if (!(kin > 0.0)) throw SpecError("rescale: kinetic term must be positive");
  const double eps = std::pow(kin, -1.0 / p.gamma_prime);
  out.epsilon = eps;
  out.x_eps = g.node(argmin_cell(state.u.values));

  double reach = 0.0;
  for (int a = 0; a < g.n; ++a)
    reach = std::max(reach, eps * g.L / 2.0 + std::abs(out.x_eps[a]));
  out.out_of_box = reach > g.L / 2.0 + 1e-12;

  double eps_n = 1.0;
  for (int a = 0; a < g.n; ++a) eps_n *= eps;

  out.m = DensityField(g);
  out.m.values = sample_affine(g, state.m.values, eps, out.x_eps);
  double total = 0.0;
  for (double& v : out.m.values) {
    v = std::max(0.0, v * eps_n);
    total += v;
  }
  const double target = mass(state.m);  // dilation preserves mass
  if (total > 0.0) {
    const double c = target / (total * g.cell_volume());
    for (double& v : out.m.values) v *= c;
  }

  out.w = FluxField(g);
  const std::size_t sz = g.size();
  std::vector<double> comp(sz);
  for (int a = 0; a < g.n; ++a) {
    comp.assign(state.w.component(a), state.w.component(a) + sz);
    std::vector<double> r = sample_affine(g, comp, eps, out.x_eps);
    double* oc = out.w.component(a);
    for (std::size_t i = 0; i < sz; ++i) oc[i] = r[i] * eps_n * eps;
  }

  out.u = ValueFunction(g);
  out.u.values = sample_affine(g, state.u.values, eps, out.x_eps);
  const double uexp = (2.0 - p.gamma) / (p.gamma - 1.0);
  const double uscale = std::pow(eps, uexp);
  for (double& v : out.u.values) v *= uscale;
  const double umin = out.u.values[argmin_cell(out.u.values)];
  for (double& v : out.u.values) v -= umin;
  return out;
}

ExponentFit fit_exponents(const std::vector<BlowupRecord>& records,
                          double gamma_prime, double q, double mu,
                          double min_epsilon) {
  ExponentFit fit;
  std::vector<double> lx, le, lE;
  for (const BlowupRecord& r : records) {
    if (!r.converged || r.epsilon < min_epsilon) continue;
    if (!(r.M_ratio > 0.0 && r.M_ratio < 1.0)) continue;
    if (!(r.energy > 0.0)) continue;
    lx.push_back(std::log(1.0 - r.M_ratio));
    le.push_back(std::log(r.epsilon));
    lE.push_back(std::log(r.energy));
  }
  fit.n_used = static_cast<int>(lx.size());
  if (fit.n_used < 5) return fit;

  auto least_squares = [](const std::vector<double>& x,
                          const std::vector<double>& y, double* slope,
                          double* intercept) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sx += x[i];
      sy += y[i];
      sxx += x[i] * x[i];
      sxy += x[i] * y[i];
    }
    *slope = (sxy - sx * sy / n) / (sxx - sx * sx / n);
    *intercept = (sy - *slope * sx) / n;
  };

  double s, c;
  least_squares(lx, le, &s, &c);
  fit.eps_slope = s;
  fit.eps_prefactor = std::exp(c);
  least_squares(lx, lE, &s, &c);
  fit.energy_slope = s;
  fit.energy_prefactor = std::exp(c);

  fit.eps_slope_predicted = 1.0 / (gamma_prime + q);
  fit.energy_slope_predicted = q / (gamma_prime + q);
  fit.eps_prefactor_predicted =
      std::pow(gamma_prime / (q * mu), 1.0 / (gamma_prime + q));
  fit.energy_prefactor_predicted =
      (q + gamma_prime) / q *
      std::pow(q * mu / gamma_prime, gamma_prime / (gamma_prime + q));
  fit.ok = true;
  return fit;
}

FlattestZeroAnalysis flattest_zero(const PotentialSpec& V,
                                   const DensityField& m0) {
  FlattestZeroAnalysis out;
  if (V.wells.empty()) return out;
  const Grid& g = m0.grid;
  const int P = 2 * g.N;
  std::size_t padded_size = 1;
  for (int a = 0; a < g.n; ++a) padded_size *= static_cast<std::size_t>(P);

  // Flip m0: correlation with the kernel becomes a convolution.
  DensityField flipped(g);
  int ix[3], jx[3] = {0, 0, 0};
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.unflatten(i, ix);
    for (int a = 0; a < g.n; ++a) jx[a] = (g.N - ix[a]) % g.N;
    flipped.values[g.flatten(jx)] = m0.values[i];
  }

  std::vector<double> samples(padded_size);
  for (const Well& well : V.wells) {
    for (std::size_t idx = 0; idx < padded_size; ++idx) {
      std::size_t rem = idx;
      int px[3] = {0, 0, 0};
      for (int a = g.n - 1; a >= 0; --a) {
        px[a] = static_cast<int>(rem % static_cast<std::size_t>(P));
        rem /= static_cast<std::size_t>(P);
      }
      double r2 = 0.0;
      for (int a = 0; a < g.n; ++a) {
        const int f = (px[a] <= P / 2) ? px[a] : px[a] - P;
        const double d = f * g.h;
        r2 += d * d;
      }
      samples[idx] = well.a * std::pow(std::sqrt(r2), well.q);
    }
    DensityField H = convolve_with_samples(g, samples, flipped);

    const std::size_t best = argmin_cell(H.values);
    g.unflatten(best, ix);
    WellAnalysis wa;
    wa.mu_i = H.values[best];
    Point y = g.node(best);
    // Local quadratic refinement per axis.
    for (int a = 0; a < g.n; ++a) {
      if (ix[a] <= 0 || ix[a] >= g.N - 1) continue;
      int lo[3], hi[3];
      std::copy(ix, ix + 3, lo);
      std::copy(ix, ix + 3, hi);
      lo[a] -= 1;
      hi[a] += 1;
      const double fm = H.values[g.flatten(lo)];
      const double f0 = H.values[best];
      const double fp = H.values[g.flatten(hi)];
      const double denom = fm - 2.0 * f0 + fp;
      if (denom > 0.0) {
        const double delta = 0.5 * (fm - fp) / denom;
        y[a] += delta * g.h;
        wa.mu_i = std::min(wa.mu_i, f0 - denom * delta * delta / 2.0);
      }
    }
    wa.y_i = y;
    out.wells.push_back(wa);
  }

  out.q = 0.0;
  for (const Well& w : V.wells) out.q = std::max(out.q, w.q);
  for (int i = 0; i < static_cast<int>(V.wells.size()); ++i)
    if (std::abs(V.wells[i].q - out.q) <= 1e-12 * std::max(1.0, out.q))
      out.Z.push_back(i);

  out.mu = 0.0;
  bool first = true;
  for (int i : out.Z) {
    if (first || out.wells[i].mu_i < out.mu) {
      out.mu = out.wells[i].mu_i;
      first = false;
    }
  }
  for (int i : out.Z)
    if (out.wells[i].mu_i <= out.mu * (1.0 + 1e-9)) out.Z0.push_back(i);
  return out;
}

ConcentrationReport concentration_check(
    const std::vector<BlowupRecord>& records,
    const FlattestZeroAnalysis& analysis, const PotentialSpec& V, double d) {
  ConcentrationReport rep;
  const BlowupRecord* top = nullptr;
  for (const BlowupRecord& r : records) {
    if (!r.converged) continue;
    if (top == nullptr || r.M_ratio > top->M_ratio) top = &r;
  }
  if (top == nullptr || analysis.Z0.empty()) return rep;
  rep.ratio_used = top->M_ratio;

  double best_dist = 0.0;
  for (std::size_t k = 0; k < analysis.Z0.size(); ++k) {
    const int wi = analysis.Z0[k];
    const Well& well = V.wells[wi];
    double d2 = 0.0;
    for (int a = 0; a < 3; ++a) {
      const double dd = top->x_eps[a] - well.P[a];
      d2 += dd * dd;
    }
    const double dist = std::sqrt(d2);
    if (k == 0 || dist < best_dist) {
      best_dist = dist;
      rep.selected_well = wi;
    }
  }
  rep.distance = best_dist;
  rep.pass = best_dist <= d;
  if (rep.selected_well >= 0 && top->epsilon > 0.0) {
    const Well& well = V.wells[rep.selected_well];
    for (int a = 0; a < 3; ++a)
      rep.y0_offset[a] = (top->x_eps[a] - well.P[a]) / top->epsilon;
    rep.y0_predicted = analysis.wells[rep.selected_well].y_i;
  }
  return rep;
}

}  // namespace mfg
