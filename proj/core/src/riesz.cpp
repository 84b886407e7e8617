#include "mfg/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>

#include "mfg/fft.hpp"

namespace mfg {

namespace {

double gauss_legendre_64(double a, double b, const auto& f) {
  // 32-point rule applied on [a,b] split in two halves.
  static const double xs[16] = {
      0.0483076656877383, 0.1444719615827965, 0.2392873622521371,
      0.3318686022821277, 0.4213512761306353, 0.5068999089322294,
      0.5877157572407623, 0.6630442669302152, 0.7321821187402897,
      0.7944837959679424, 0.8493676137325700, 0.8963211557660521,
      0.9349060759377397, 0.9647622555875064, 0.9856115115452684,
      0.9972638618494816};
  static const double ws[16] = {
      0.0965400885147278, 0.0956387200792749, 0.0938443990808046,
      0.0911738786957639, 0.0876520930044038, 0.0833119242269467,
      0.0781938957870703, 0.0723457941088485, 0.0658222227763618,
      0.0586840934785355, 0.0509980592623762, 0.0428358980222267,
      0.0342738629130214, 0.0253920653092621, 0.0162743947309057,
      0.0070186100094701};
  auto seg = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    double s = 0.0;
    for (int i = 0; i < 16; ++i)
      s += ws[i] * (f(c + r * xs[i]) + f(c - r * xs[i]));
    return s * r;
  };
  const double mid = 0.5 * (a + b);
  return seg(a, mid) + seg(mid, b);
}

struct KernelData {
  double origin_avg;
  std::shared_ptr<std::vector<double>> samples;
  std::shared_ptr<std::vector<double>> spectrum;
};

struct KernelKey {
  int n;
  int N;
  std::uint64_t L_bits;
  std::uint64_t alpha_bits;
  bool operator<(const KernelKey& o) const {
    if (n != o.n) return n < o.n;
    if (N != o.N) return N < o.N;
    if (L_bits != o.L_bits) return L_bits < o.L_bits;
    return alpha_bits < o.alpha_bits;
  }
};

std::uint64_t dbits(double x) {
  std::uint64_t u;
  static_assert(sizeof(u) == sizeof(x));
  std::memcpy(&u, &x, sizeof(u));
  return u;
}

std::mutex kernel_cache_mutex;
std::map<KernelKey, KernelData>& kernel_cache() {
  static std::map<KernelKey, KernelData> cache;
  return cache;
}

KernelData build_kernel_data(const Grid& grid, double alpha) {
  const int P = 2 * grid.N;
  std::size_t padded_size = 1;
  for (int a = 0; a < grid.n; ++a) padded_size *= static_cast<std::size_t>(P);

  auto samples = std::make_shared<std::vector<double>>(padded_size, 0.0);
  const double expo = alpha - grid.n;
  const double origin = origin_cell_average(grid.n, grid.h, alpha);

  int ix[3] = {0, 0, 0};
  for (std::size_t idx = 0; idx < padded_size; ++idx) {
    std::size_t rem = idx;
    for (int a = grid.n - 1; a >= 0; --a) {
      ix[a] = static_cast<int>(rem % static_cast<std::size_t>(P));
      rem /= static_cast<std::size_t>(P);
    }
    double r2 = 0.0;
    for (int a = 0; a < grid.n; ++a) {
      const int f = (ix[a] <= P / 2) ? ix[a] : ix[a] - P;
      const double d = f * grid.h;
      r2 += d * d;
    }
    (*samples)[idx] =
        (r2 == 0.0) ? origin : std::pow(std::sqrt(r2), expo);
  }

  Spectral& sp = Spectral::for_padded(grid);
  std::vector<std::complex<double>> spec(sp.spec_size());
  sp.forward(samples->data(), spec.data());
  auto spectrum = std::make_shared<std::vector<double>>(sp.spec_size());
  for (std::size_t s = 0; s < spec.size(); ++s)
    (*spectrum)[s] = spec[s].real();  // even kernel: imaginary parts vanish

  return KernelData{origin, samples, spectrum};
}

}  // namespace

double origin_cell_average(int n, double h, double alpha) {
  if (n == 1) {
    // (1/h) * 2 * (h/2)^alpha / alpha
    return 2.0 * std::pow(0.5 * h, alpha) / (alpha * h);
  }
  if (n == 2) {
    // (1/(alpha h^2)) * 8 * (h/2)^alpha * int_0^{pi/4} sec^alpha
    const double I = gauss_legendre_64(0.0, std::numbers::pi / 4.0,
                                       [&](double th) {
                                         return std::pow(std::cos(th), -alpha);
                                       });
    return 8.0 * std::pow(0.5 * h, alpha) * I / (alpha * h * h);
  }
  // n == 3: six pyramids; each gives (h/(2 alpha)) * int_face r^{alpha-3}
  const double half = 0.5 * h;
  auto inner = [&](double x) {
    return gauss_legendre_64(-half, half, [&](double y) {
      return std::pow(x * x + y * y + half * half, 0.5 * (alpha - 3.0));
    });
  };
  const double I = gauss_legendre_64(-half, half, inner);
  return 6.0 * half * I / (alpha * h * h * h);
}

RieszKernel build_kernel(const Grid& grid, double alpha) {
  if (!(alpha > 0.0) || !(alpha < static_cast<double>(grid.n)))
    throw SpecError("build_kernel: alpha must lie in (0, n)");

  KernelKey key{grid.n, grid.N, dbits(grid.L), dbits(alpha)};
  KernelData data;
  {
    std::lock_guard<std::mutex> lock(kernel_cache_mutex);
    auto it = kernel_cache().find(key);
    if (it != kernel_cache().end()) {
      data = it->second;
    }
  }
  if (!data.samples) {
    // Built outside the lock; insertion is idempotent (deterministic data).
    data = build_kernel_data(grid, alpha);
    std::lock_guard<std::mutex> lock(kernel_cache_mutex);
    auto [it, inserted] = kernel_cache().emplace(key, data);
    if (!inserted) data = it->second;
  }

  RieszKernel k;
  k.grid = grid;
  k.alpha = alpha;
  k.origin_cell_average = data.origin_avg;
  k.padded_samples = data.samples;
  k.spectrum = data.spectrum;
  return k;
}

namespace {

void pad_into(const Grid& g, const std::vector<double>& box,
              std::vector<double>& padded) {
  const int N = g.N, P = 2 * N;
  padded.assign(Spectral::for_padded(g).real_size(), 0.0);
  if (g.n == 1) {
    for (int i = 0; i < N; ++i) padded[i] = box[i];
  } else if (g.n == 2) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        padded[static_cast<std::size_t>(i) * P + j] =
            box[static_cast<std::size_t>(i) * N + j];
  } else {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l)
          padded[(static_cast<std::size_t>(i) * P + j) * P + l] =
              box[(static_cast<std::size_t>(i) * N + j) * N + l];
  }
}

void unpad_from(const Grid& g, const std::vector<double>& padded,
                std::vector<double>& box) {
  const int N = g.N, P = 2 * N;
  box.resize(g.size());
  if (g.n == 1) {
    for (int i = 0; i < N; ++i) box[i] = padded[i];
  } else if (g.n == 2) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        box[static_cast<std::size_t>(i) * N + j] =
            padded[static_cast<std::size_t>(i) * P + j];
  } else {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l)
          box[(static_cast<std::size_t>(i) * N + j) * N + l] =
              padded[(static_cast<std::size_t>(i) * P + j) * P + l];
  }
}

}  // namespace

DensityField convolve(const RieszKernel& kernel, const DensityField& m) {
  if (!(m.grid == kernel.grid))
    throw SpecError("convolve: grid mismatch between kernel and density");
  Spectral& sp = Spectral::for_padded(kernel.grid);

  thread_local std::vector<double> padded;
  thread_local std::vector<std::complex<double>> spec;
  pad_into(kernel.grid, m.values, padded);
  spec.resize(sp.spec_size());
  sp.forward(padded.data(), spec.data());
  const std::vector<double>& ks = *kernel.spectrum;
  for (std::size_t s = 0; s < spec.size(); ++s) spec[s] *= ks[s];
  sp.inverse(spec.data(), padded.data());

  DensityField out(kernel.grid);
  unpad_from(kernel.grid, padded, out.values);
  const double vol = kernel.grid.cell_volume();
  for (double& v : out.values) v *= vol;
  return out;
}

double interaction_energy(const RieszKernel& kernel, const DensityField& m) {
  return interaction_cross(kernel, m, m);
}

DensityField convolve_with_samples(const Grid& grid,
                                   const std::vector<double>& padded_samples,
                                   const DensityField& m) {
  if (!(m.grid == grid)) throw SpecError("convolve_with_samples: grid mismatch");
  Spectral& sp = Spectral::for_padded(grid);
  if (padded_samples.size() != sp.real_size())
    throw SpecError("convolve_with_samples: kernel sample count mismatch");

  std::vector<double> padded;
  std::vector<std::complex<double>> spec(sp.spec_size()), kspec(sp.spec_size());
  pad_into(grid, m.values, padded);
  sp.forward(padded.data(), spec.data());
  sp.forward(padded_samples.data(), kspec.data());
  for (std::size_t s = 0; s < spec.size(); ++s) spec[s] *= kspec[s];
  sp.inverse(spec.data(), padded.data());

  DensityField out(grid);
  unpad_from(grid, padded, out.values);
  const double vol = grid.cell_volume();
  for (double& v : out.values) v *= vol;
  return out;
}

double interaction_cross(const RieszKernel& kernel, const DensityField& a,
                         const DensityField& b) {
  if (!(a.grid == kernel.grid) || !(b.grid == kernel.grid))
    throw SpecError("interaction: grid mismatch");
  Spectral& sp = Spectral::for_padded(kernel.grid);

  thread_local std::vector<double> padded;
  thread_local std::vector<std::complex<double>> spec_a, spec_b;
  pad_into(kernel.grid, a.values, padded);
  spec_a.resize(sp.spec_size());
  sp.forward(padded.data(), spec_a.data());
  const bool same = (&a == &b) || (a.values == b.values);
  if (!same) {
    pad_into(kernel.grid, b.values, padded);
    spec_b.resize(sp.spec_size());
    sp.forward(padded.data(), spec_b.data());
  }

  const std::vector<double>& ks = *kernel.spectrum;
  double acc = 0.0;
  for (std::size_t s = 0; s < spec_a.size(); ++s) {
    const std::complex<double>& fa = spec_a[s];
    const std::complex<double>& fb = same ? spec_a[s] : spec_b[s];
    const double re = fa.real() * fb.real() + fa.imag() * fb.imag();
    acc += sp.parseval_weight(s) * ks[s] * re;
  }
  const double vol = kernel.grid.cell_volume();
  return acc * vol * vol / static_cast<double>(sp.real_size());
}

double hls_ratio(const RieszKernel& kernel, const DensityField& f) {
  double num = interaction_energy(kernel, f);
  const double r = 2.0 * kernel.grid.n / (kernel.grid.n + kernel.alpha);
  double nr = 0.0;
  for (double v : f.values) nr += std::pow(std::abs(v), r);
  nr *= kernel.grid.cell_volume();
  if (nr == 0.0) return 0.0;
  return num / std::pow(nr, 2.0 / r);
}

HlsReport hls_check(const Grid& grid, double alpha, int n_random,
                    std::uint64_t seed, double bound) {
  RieszKernel kernel = build_kernel(grid, alpha);
  HlsReport rep;

  // Dilated Gaussian family: the ratio is dilation-invariant in the
  // continuum, so the spread across t doubles as a quadrature check.
  std::vector<double> ratios;
  for (double t : {0.5, 0.75, 1.0, 1.5, 2.0}) {
    DensityField g(grid);
    const double sigma = 0.08 * grid.L * t;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Point x = grid.node(i);
      double r2 = 0.0;
      for (int a = 0; a < grid.n; ++a) r2 += x[a] * x[a];
      g.values[i] = std::exp(-0.5 * r2 / (sigma * sigma));
    }
    ratios.push_back(hls_ratio(kernel, g));
  }
  rep.gaussian_max_ratio = *std::max_element(ratios.begin(), ratios.end());
  const double mean =
      std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size();
  double spread = 0.0;
  for (double r : ratios) spread = std::max(spread, std::abs(r - mean) / mean);
  rep.gaussian_dilation_spread = spread;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  rep.random_max_ratio = 0.0;
  for (int k = 0; k < n_random; ++k) {
    DensityField f(grid);
    const int bumps = 2 + static_cast<int>(unif(rng) * 3);
    for (int b = 0; b < bumps; ++b) {
      Point c{0, 0, 0};
      for (int a = 0; a < grid.n; ++a) c[a] = (unif(rng) - 0.5) * grid.L * 0.4;
      const double amp = 0.2 + 0.8 * unif(rng);
      const double sig = (0.03 + 0.08 * unif(rng)) * grid.L;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const Point x = grid.node(i);
        double r2 = 0.0;
        for (int a = 0; a < grid.n; ++a) {
          const double d = x[a] - c[a];
          r2 += d * d;
        }
        f.values[i] += amp * std::exp(-0.5 * r2 / (sig * sig));
      }
    }
    rep.random_max_ratio = std::max(rep.random_max_ratio, hls_ratio(kernel, f));
  }

  rep.bound = (bound > 0.0) ? bound : 1.5 * rep.gaussian_max_ratio;
  rep.pass = rep.random_max_ratio <= rep.bound &&
             rep.gaussian_max_ratio <= rep.bound;
  return rep;
}

}  // namespace mfg
