#include "mfg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>

#include "mfg/fft.hpp"
#include "mfg/resample.hpp"

namespace mfg {

namespace {

struct Objective {
  ProblemParams p;
  Grid grid;
  RieszKernel kernel;
  const DensityField* V = nullptr;
  Floors fl{};
  bool recenter = false;   // translation gauge for the potential-free problem
  bool gamma_mode = false; // minimize log G_a instead of E
};

struct State {
  DensityField m;
  FluxField w;
};

void zero_flux_on_floor(State& s, const Floors& fl) {
  const std::size_t sz = s.m.grid.size();
  const double thresh = fl.m * (1.0 + 1e-9);
  for (std::size_t i = 0; i < sz; ++i) {
    if (s.m.values[i] <= thresh) {
      for (int a = 0; a < s.m.grid.n; ++a) s.w.component(a)[i] = 0.0;
    }
  }
}

void circular_shift(std::vector<double>& f, const Grid& g, const int shift[3]) {
  std::vector<double> out(f.size());
  const int N = g.N;
  int ix[3];
  for (std::size_t i = 0; i < f.size(); ++i) {
    g.unflatten(i, ix);
    int jx[3] = {0, 0, 0};
    for (int a = 0; a < g.n; ++a) {
      jx[a] = ix[a] + shift[a];
      jx[a] = ((jx[a] % N) + N) % N;
    }
    out[g.flatten(jx)] = f[i];
  }
  f.swap(out);
}

// Shift fields so the argmax of m lands on the center node (lowest
// lexicographic index on ties, via argmax_cell).
void recenter_state(State& s) {
  const Grid& g = s.m.grid;
  const std::size_t peak = argmax_cell(s.m.values);
  int ix[3];
  g.unflatten(peak, ix);
  int shift[3] = {0, 0, 0};
  bool any = false;
  for (int a = 0; a < g.n; ++a) {
    shift[a] = g.N / 2 - ix[a];
    if (shift[a] != 0) any = true;
  }
  if (!any) return;
  circular_shift(s.m.values, g, shift);
  std::vector<double> comp(g.size());
  for (int a = 0; a < g.n; ++a) {
    comp.assign(s.w.component(a), s.w.component(a) + g.size());
    circular_shift(comp, g, shift);
    std::copy(comp.begin(), comp.end(), s.w.component(a));
  }
}

void constrain(State& s, const Objective& obj) {
  s.m = renormalize_mass(s.m, obj.p.M);
  s.w = project_fp(s.m, s.w);
  zero_flux_on_floor(s, obj.fl);
  if (obj.recenter) recenter_state(s);
}

struct EvalResult {
  double objective = std::numeric_limits<double>::infinity();
  EnergyBreakdown bd;
  bool overflow = false;
};

EvalResult evaluate(const State& s, const Objective& obj) {
  EvalResult r;
  const KineticResult k = kinetic_term(s.m, s.w, obj.p);
  r.bd.kinetic = k.value;
  r.bd.kinetic_overflow = k.overflow;
  if (k.overflow) {
    r.overflow = true;
    return r;
  }
  r.bd.potential = potential_energy(s.m, obj.V);
  r.bd.interaction = interaction_energy(obj.kernel, s.m);
  r.bd.mass = mass(s.m);
  r.bd.total = r.bd.kinetic + r.bd.potential - r.bd.interaction / 2.0;
  if (obj.gamma_mode) {
    if (!(r.bd.interaction > 0.0) || !(r.bd.kinetic > 0.0)) {
      r.overflow = true;
      return r;
    }
    const double e1 = (obj.p.n - obj.p.alpha) / obj.p.gamma_prime;
    const double e2 =
        (2.0 * obj.p.gamma_prime + obj.p.alpha - obj.p.n) / obj.p.gamma_prime;
    r.objective = e1 * std::log(r.bd.kinetic) + e2 * std::log(r.bd.mass) -
                  std::log(r.bd.interaction);
  } else {
    r.objective = r.bd.total;
  }
  return r;
}

// Gradient of the objective at a feasible state; conv = K*m precomputed.
void objective_gradient(const State& s, const Objective& obj,
                        const DensityField& conv, const EvalResult& at,
                        DensityField& gm, FluxField& gw) {
  EnergyGradient eg = energy_gradient(s.m, s.w, obj.V, conv, obj.p);
  if (!obj.gamma_mode) {
    gm = std::move(eg.dm);
    gw = std::move(eg.dw);
    return;
  }
  // d log G = e1 d kin / kin + e2 d mass / mass - d int / int, and the
  // energy gradient splits as dm = kin_part + V - conv, dw = kinetic only.
  const double e1 = (obj.p.n - obj.p.alpha) / obj.p.gamma_prime;
  const double e2 =
      (2.0 * obj.p.gamma_prime + obj.p.alpha - obj.p.n) / obj.p.gamma_prime;
  const double kin = at.bd.kinetic;
  const double inter = at.bd.interaction;
  const double mas = at.bd.mass;
  gm = DensityField(s.m.grid);
  gw = FluxField(s.m.grid);
  const std::size_t sz = s.m.grid.size();
  for (std::size_t i = 0; i < sz; ++i) {
    const double kin_dm = eg.dm.values[i] + conv.values[i] -
                          (obj.V ? obj.V->values[i] : 0.0);
    gm.values[i] = e1 * kin_dm / kin + e2 / mas -
                   2.0 * conv.values[i] / inter;
    for (int a = 0; a < s.m.grid.n; ++a)
      gw.component(a)[i] = e1 * eg.dw.component(a)[i] / kin;
  }
}

double l2sq(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

struct DescendResult {
  State s;
  EvalResult ev;
  SolveStatus status = SolveStatus::NonConverged;
  int iterations = 0;
};

DescendResult descend(State init, const Objective& obj,
                      const SolverConfig& cfg) {
  DescendResult out;
  State cur = std::move(init);
  constrain(cur, obj);
  EvalResult ev = evaluate(cur, obj);
  if (ev.overflow)
    throw SpecError("descend: seed state has infinite kinetic energy");

  const double E0 = ev.objective;
  const double kin0 = ev.bd.kinetic;
  const double vol = obj.grid.cell_volume();

  double step = cfg.step0;
  double pg0 = 0.0;
  int consec_small = 0;
  DensityField gm;
  FluxField gw;

  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    const DensityField conv = convolve(obj.kernel, cur.m);
    objective_gradient(cur, obj, conv, ev, gm, gw);

    if (step <= 0.0) {
      double mn = 0.0, gn = 0.0;
      for (double v : cur.m.values) mn += v * v;
      for (double v : gm.values) gn += v * v;
      for (double v : gw.values) gn += v * v;
      step = 0.1 * std::sqrt(mn / (gn + 1e-300));
      if (!(step > 0.0)) step = 1.0;
    }

    bool accepted = false;
    State trial;
    EvalResult trial_ev;
    double dist2 = 0.0;
    for (int ls = 0; ls < 60; ++ls) {
      trial.m = DensityField(obj.grid);
      trial.w = FluxField(obj.grid);
      for (std::size_t i = 0; i < cur.m.values.size(); ++i)
        trial.m.values[i] = cur.m.values[i] - step * gm.values[i];
      for (std::size_t i = 0; i < cur.w.values.size(); ++i)
        trial.w.values[i] = cur.w.values[i] - step * gw.values[i];
      constrain(trial, obj);
      trial_ev = evaluate(trial, obj);
      if (!trial_ev.overflow) {
        dist2 = vol * (l2sq(trial.m.values, cur.m.values) +
                       l2sq(trial.w.values, cur.w.values));
        if (trial_ev.objective <= ev.objective - 1e-4 * dist2 / step) {
          accepted = true;
          break;
        }
      }
      step *= cfg.backtrack;
      if (step < 1e-300) break;
    }

    if (!accepted) break;  // stationary to line-search resolution

    const double pg = std::sqrt(dist2) / step;
    if (pg0 == 0.0) pg0 = pg;
    const double rel_change =
        (ev.objective - trial_ev.objective) /
        std::max(std::abs(trial_ev.objective), 1e-300);
    cur = std::move(trial);
    ev = trial_ev;

    consec_small = (rel_change < cfg.tol_energy) ? consec_small + 1 : 0;
    if (consec_small >= 10 && pg <= cfg.tol_grad * pg0) {
      out.status = SolveStatus::Converged;
      break;
    }

    if (!obj.gamma_mode) {
      const double floor = (cfg.unbounded_floor != 0.0)
                               ? cfg.unbounded_floor
                               : -10.0 * (std::abs(E0) + 1.0);
      if (ev.objective < floor &&
          ev.bd.kinetic > cfg.kinetic_growth * (kin0 + 1.0)) {
        out.status = SolveStatus::UnboundedSuspected;
        break;
      }
    }

    step = std::min(step * cfg.step_growth, 1e12);
  }

  if (out.status == SolveStatus::NonConverged && consec_small >= 10)
    out.status = SolveStatus::Converged;  // stalled at stationarity

  out.s = std::move(cur);
  out.ev = evaluate(out.s, obj);
  out.iterations = iter;
  return out;
}

double boundary_ratio(const DensityField& m) {
  const Grid& g = m.grid;
  double mx = 0.0, bmx = 0.0;
  int ix[3];
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    mx = std::max(mx, m.values[i]);
    g.unflatten(i, ix);
    for (int a = 0; a < g.n; ++a) {
      if (ix[a] == 0) {
        bmx = std::max(bmx, m.values[i]);
        break;
      }
    }
  }
  return (mx > 0.0) ? bmx / mx : 0.0;
}

double rel_residual(double lhs, double rhs) {
  return std::abs(lhs - rhs) /
         std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

GroundState finalize(DescendResult&& d, const Objective& obj) {
  GroundState gs;
  gs.m = std::move(d.s.m);
  gs.w = std::move(d.s.w);
  gs.breakdown = d.ev.bd;
  gs.status = d.status;
  gs.converged = (d.status == SolveStatus::Converged);
  gs.iterations = d.iterations;
  gs.boundary_mass_ratio = boundary_ratio(gs.m);

  auto [u, lambda] =
      recover_u_lambda(gs.m, gs.w, obj.V, obj.kernel, obj.p,
                       &gs.curl_residual);
  gs.u = std::move(u);
  gs.lambda = lambda;

  gs.residuals.fp = fp_residual(gs.m, gs.w);
  auto [hjb, fp_u] = system_residuals(gs, obj.V, obj.kernel, obj.p);
  gs.residuals.hjb = hjb;
  (void)fp_u;  // the state's own fp residual is the reported one

  const double gp = obj.p.gamma_prime;
  const double a = obj.p.alpha;
  const double n = obj.p.n;
  const double inter = gs.breakdown.interaction;
  gs.residuals.pohozaev1 = rel_residual(
      gs.lambda * gs.breakdown.mass, -(a + 2.0 * gp - n) / (2.0 * gp) * inter);
  gs.residuals.pohozaev2 =
      rel_residual(gs.breakdown.kinetic, (n - a) / (2.0 * gp) * inter);
  return gs;
}

State make_seed(const Objective& obj, const PotentialSpec& V, int restart,
                std::uint64_t seed) {
  const Grid& g = obj.grid;
  Point center{0.0, 0.0, 0.0};
  double sigma = 1.0;
  if (restart == 0) {
    if (!V.wells.empty()) center = V.wells.front().P;
  } else {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(restart) * 7919);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (!V.wells.empty()) {
      const std::size_t wi =
          std::min<std::size_t>(static_cast<std::size_t>(unif(rng) * V.wells.size()),
                                V.wells.size() - 1);
      center = V.wells[wi].P;
    } else {
      for (int a = 0; a < g.n; ++a)
        center[a] = (unif(rng) - 0.5) * 0.25 * g.L;
    }
    sigma = 0.5 + 1.5 * unif(rng);
  }
  auto [m, w] = seed_pair_at(g, obj.p.M, center, sigma);
  return State{std::move(m), std::move(w)};
}

int better_of(const GroundState& a, const GroundState& b) {
  // Returns 0 if a wins, 1 if b wins. Converged beats non-converged, then
  // lower energy, then lower index (caller order).
  if (a.converged != b.converged) return a.converged ? 0 : 1;
  return (a.breakdown.total <= b.breakdown.total) ? 0 : 1;
}

GroundState run_multistart(const Objective& obj, const PotentialSpec& V,
                           const SolverConfig& cfg) {
  const int R = std::max(1, cfg.restarts);
  std::vector<GroundState> results;
  results.reserve(R);

  auto run_one = [&](int r) {
    State s = make_seed(obj, V, r, cfg.seed);
    return finalize(descend(std::move(s), obj, cfg), obj);
  };

  if (cfg.threads > 1 && R > 1) {
    std::vector<std::future<GroundState>> futs;
    for (int r = 0; r < R; ++r)
      futs.push_back(std::async(std::launch::async, run_one, r));
    for (auto& f : futs) results.push_back(f.get());
  } else {
    for (int r = 0; r < R; ++r) results.push_back(run_one(r));
  }

  for (const GroundState& g : results)
    if (g.status == SolveStatus::UnboundedSuspected) return g;

  int best = 0;
  for (int r = 1; r < R; ++r)
    if (better_of(results[best], results[r]) == 1) best = r;
  return std::move(results[best]);
}

Objective make_objective(const ProblemParams& p, const Grid& grid,
                         const DensityField* V) {
  Objective obj;
  obj.p = p;
  obj.grid = grid;
  obj.kernel = build_kernel(grid, p.alpha);
  obj.V = V;
  obj.fl = floors_for(p, grid);
  return obj;
}

}  // namespace

GroundState minimize_energy(const ProblemParams& p, const Grid& grid,
                            const PotentialSpec& V, const SolverConfig& cfg) {
  DensityField Vf;
  const DensityField* Vp = nullptr;
  if (!V.empty()) {
    Vf = eval_potential(V, grid);
    Vp = &Vf;
  }
  Objective obj = make_objective(p, grid, Vp);
  obj.recenter = (Vp == nullptr);
  return run_multistart(obj, V, cfg);
}

GroundState minimize_energy(const ProblemParams& p, const Grid& grid,
                            const PotentialSpec& V, const SolverConfig& cfg,
                            const DensityField& m0, const FluxField& w0) {
  DensityField Vf;
  const DensityField* Vp = nullptr;
  if (!V.empty()) {
    Vf = eval_potential(V, grid);
    Vp = &Vf;
  }
  Objective obj = make_objective(p, grid, Vp);
  obj.recenter = (Vp == nullptr);
  State s{m0, w0};
  return finalize(descend(std::move(s), obj, cfg), obj);
}

GroundState minimize_free(const ProblemParams& p, const Grid& grid,
                          const SolverConfig& cfg) {
  if (p.alpha <= p.critical_alpha() + 1e-12)
    throw SpecError(
        "minimize_free: finite free minimizers need subcritical alpha");
  Objective obj = make_objective(p, grid, nullptr);
  obj.recenter = true;
  return run_multistart(obj, PotentialSpec{}, cfg);
}

GammaEstimate estimate_gamma(const ProblemParams& p, const Grid& grid,
                             const SolverConfig& cfg) {
  ProblemParams pg = p;
  pg.M = 1.0;  // gauge: unit mass
  Objective obj = make_objective(pg, grid, nullptr);
  obj.recenter = true;
  obj.gamma_mode = true;

  auto normalize_scale = [&](State& s) {
    const KineticResult k = kinetic_term(s.m, s.w, pg);
    if (k.overflow || !(k.value > 0.0)) return;
    const double t = std::pow(k.value, -1.0 / pg.gamma_prime);
    if (std::abs(std::log(t)) < std::log(1.25)) return;
    s.m = dilate_density(s.m, t);
    s.w = dilate_flux(s.w, t);
    constrain(s, obj);
  };

  auto [m, w] = seed_pair(grid, 1.0);
  State s{std::move(m), std::move(w)};
  constrain(s, obj);
  normalize_scale(s);

  // Outer rounds interleave descent with the kinetic-1 scale gauge.
  SolverConfig inner = cfg;
  inner.max_iters = std::max(200, cfg.max_iters / 8);
  DescendResult d;
  d.s = std::move(s);
  bool converged = false;
  int total_iters = 0;
  for (int round = 0; round < 8; ++round) {
    d = descend(std::move(d.s), obj, inner);
    total_iters += d.iterations;
    normalize_scale(d.s);
    if (d.status == SolveStatus::Converged && round > 0) {
      converged = true;
      break;
    }
    if (total_iters >= cfg.max_iters) break;
  }

  GammaEstimate est;
  est.gamma_hat = std::exp(evaluate(d.s, obj).objective);
  est.converged = converged || d.status == SolveStatus::Converged;
  d.status = est.converged ? SolveStatus::Converged : d.status;
  d.iterations = total_iters;
  est.state = finalize(std::move(d), obj);
  return est;
}

double critical_mass(const ProblemParams& p, const Grid& grid,
                     const SolverConfig& cfg) {
  if (!p.alpha_is_critical())
    throw SpecError("critical_mass: alpha must be resolved to the critical "
                    "exponent");
  return 2.0 * estimate_gamma(p, grid, cfg).gamma_hat;
}

std::pair<ValueFunction, double> recover_u_lambda(
    const DensityField& m, const FluxField& w, const DensityField* V,
    const RieszKernel& kernel, const ProblemParams& p, double* curl_residual) {
  const Grid& g = m.grid;
  const Floors fl = floors_for(p, g);
  const double gp = p.gamma_prime;
  const double chg = p.C_H * p.gamma;

  // Duality map: |grad u| = (|w/m| / (C_H gamma))^{1/(gamma-1)}, direction
  // opposite to w.
  FluxField grad_candidate(g);
  const std::size_t sz = g.size();
  for (std::size_t i = 0; i < sz; ++i) {
    double wn = 0.0;
    for (int a = 0; a < g.n; ++a) {
      const double v = w.component(a)[i];
      wn += v * v;
    }
    wn = std::sqrt(wn);
    const double mi = m.values[i];
    if (wn <= fl.w || mi <= fl.m) continue;
    const double mag = std::pow(wn / (mi * chg), gp - 1.0);
    for (int a = 0; a < g.n; ++a)
      grad_candidate.component(a)[i] = -mag * w.component(a)[i] / wn;
  }

  Spectral& sp = Spectral::for_grid(g);
  std::vector<double> div;
  sp.divergence(grad_candidate, div);
  ValueFunction u(g);
  sp.poisson_zero_mean(div, u.values);

  if (curl_residual != nullptr) {
    FluxField gu(g);
    sp.gradient(u.values, gu);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < gu.values.size(); ++i) {
      const double d = grad_candidate.values[i] - gu.values[i];
      num += d * d;
      den += grad_candidate.values[i] * grad_candidate.values[i];
    }
    *curl_residual = (den > 0.0) ? std::sqrt(num / den) : 0.0;
  }

  const double umin = u.values[argmin_cell(u.values)];
  for (double& v : u.values) v -= umin;

  const KineticResult k = kinetic_term(m, w, p);
  const double lambda = (k.value + potential_energy(m, V) -
                         interaction_energy(kernel, m)) /
                        mass(m);
  return {std::move(u), lambda};
}

std::pair<double, double> system_residuals(const GroundState& state,
                                           const DensityField* V,
                                           const RieszKernel& kernel,
                                           const ProblemParams& p) {
  const Grid& g = state.m.grid;
  Spectral& sp = Spectral::for_grid(g);
  const std::size_t sz = g.size();

  FluxField gu(g);
  sp.gradient(state.u.values, gu);
  std::vector<double> lap_u;
  sp.laplacian(state.u.values, lap_u);
  const DensityField conv = convolve(kernel, state.m);

  double num = 0.0;
  double n_lap = 0.0, n_ham = 0.0, n_rhs = 0.0, n_lam = 0.0;
  for (std::size_t i = 0; i < sz; ++i) {
    double gn = 0.0;
    for (int a = 0; a < g.n; ++a) gn += gu.component(a)[i] * gu.component(a)[i];
    gn = std::sqrt(gn);
    const double ham = p.C_H * std::pow(gn, p.gamma);
    const double rhs = (V ? V->values[i] : 0.0) - conv.values[i];
    const double r = -lap_u[i] + ham + state.lambda - rhs;
    num += r * r;
    n_lap += lap_u[i] * lap_u[i];
    n_ham += ham * ham;
    n_rhs += rhs * rhs;
    n_lam += state.lambda * state.lambda;
  }
  const double den =
      std::sqrt(std::max({n_lap, n_ham, n_rhs, n_lam, 1e-300}));
  const double hjb = std::sqrt(num) / den;

  // Fokker-Planck residual with the u-based flux -C_H gamma m |grad u|^{g-2}
  // grad u.
  FluxField wu(g);
  const double chg = p.C_H * p.gamma;
  for (std::size_t i = 0; i < sz; ++i) {
    double gn = 0.0;
    for (int a = 0; a < g.n; ++a) gn += gu.component(a)[i] * gu.component(a)[i];
    gn = std::sqrt(gn);
    const double scale =
        (gn > 0.0) ? -chg * state.m.values[i] * std::pow(gn, p.gamma - 2.0)
                   : 0.0;
    for (int a = 0; a < g.n; ++a)
      wu.component(a)[i] = scale * gu.component(a)[i];
  }
  std::vector<double> lap_m, div_wu;
  sp.laplacian(state.m.values, lap_m);
  sp.divergence(wu, div_wu);
  double fnum = 0.0, fden = 0.0;
  for (std::size_t i = 0; i < sz; ++i) {
    const double r = lap_m[i] - div_wu[i];
    fnum += r * r;
    fden += lap_m[i] * lap_m[i];
  }
  const double fp = (fden > 0.0) ? std::sqrt(fnum / fden) : std::sqrt(fnum);
  return {hjb, fp};
}

DensityField gibbs_crosscheck(const ValueFunction& u, const ProblemParams& p) {
  if (std::abs(p.gamma - 2.0) > 1e-12)
    throw SpecError("gibbs_crosscheck: closed form requires gamma = 2");
  DensityField m(u.grid);
  const double umin = *std::min_element(u.values.begin(), u.values.end());
  double total = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    m.values[i] = std::exp(-2.0 * p.C_H * (u.values[i] - umin));
    total += m.values[i];
  }
  const double c = p.M / (total * u.grid.cell_volume());
  for (double& v : m.values) v *= c;
  return m;
}

double schrodinger_mu(const ProblemParams& p) {
  // Consistent with the gamma-carrying Fokker-Planck drift; equals
  // gamma'^{gamma'} C_L.
  return std::pow(p.gamma_prime / (p.gamma * p.C_H), p.gamma_prime - 1.0);
}

double schrodinger_residual(const DensityField& m, const DensityField* V,
                            double lambda, const RieszKernel& kernel,
                            const ProblemParams& p) {
  const Grid& g = m.grid;
  Spectral& sp = Spectral::for_grid(g);
  const Floors fl = floors_for(p, g);
  const double gp = p.gamma_prime;
  const double mu = schrodinger_mu(p);
  const std::size_t sz = g.size();

  std::vector<double> v(sz);
  for (std::size_t i = 0; i < sz; ++i)
    v[i] = std::pow(std::max(m.values[i], 0.0), 1.0 / gp);

  FluxField gv(g);
  sp.gradient(v, gv);
  FluxField q(g);
  for (std::size_t i = 0; i < sz; ++i) {
    double gn = 0.0;
    for (int a = 0; a < g.n; ++a) gn += gv.component(a)[i] * gv.component(a)[i];
    gn = std::sqrt(gn);
    const double scale = (gn > 0.0) ? std::pow(gn, gp - 2.0) : 0.0;
    for (int a = 0; a < g.n; ++a)
      q.component(a)[i] = scale * gv.component(a)[i];
  }
  std::vector<double> lap_g;
  sp.divergence(q, lap_g);

  const DensityField conv = convolve(kernel, m);
  double num = 0.0, d1 = 0.0, d2 = 0.0;
  for (std::size_t i = 0; i < sz; ++i) {
    if (m.values[i] <= 10.0 * fl.m) continue;
    const double zero_order =
        (-conv.values[i] + (V ? V->values[i] : 0.0) - lambda) *
        std::pow(v[i], gp - 1.0);
    const double r = -mu * lap_g[i] + zero_order;
    num += r * r;
    d1 += mu * mu * lap_g[i] * lap_g[i];
    d2 += zero_order * zero_order;
  }
  const double den = std::sqrt(std::max({d1, d2, 1e-300}));
  return std::sqrt(num) / den;
}

}  // namespace mfg
