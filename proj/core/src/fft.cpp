#include "mfg/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace mfg {

namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Spectral::Spectral(int n, const int* dims, const double* lengths) : n_(n) {
  real_size_ = 1;
  for (int a = 0; a < n; ++a) {
    dims_[a] = dims[a];
    real_size_ *= static_cast<std::size_t>(dims[a]);
  }
  spec_size_ = real_size_ / static_cast<std::size_t>(dims_[n - 1]) *
               static_cast<std::size_t>(dims_[n - 1] / 2 + 1);

  kz_.resize(n);
  for (int a = 0; a < n; ++a) {
    const int N = dims_[a];
    const double k0 = 2.0 * std::numbers::pi / lengths[a];
    kz_[a].resize(N);
    for (int i = 0; i < N; ++i) {
      int f = (i <= N / 2) ? i : i - N;
      if (i == N / 2) f = 0;  // Nyquist zeroed for odd-order operators
      kz_[a][i] = k0 * f;
    }
  }

  rbuf_ = fftw_alloc_real(real_size_);
  cbuf_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(spec_size_));
  spec_a_.resize(spec_size_);
  spec_b_.resize(spec_size_);

  std::lock_guard<std::mutex> lock(plan_mutex());
  plan_fwd_ = fftw_plan_dft_r2c(n_, dims_, rbuf_,
                                reinterpret_cast<fftw_complex*>(cbuf_),
                                FFTW_ESTIMATE);
  plan_inv_ = fftw_plan_dft_c2r(n_, dims_,
                                reinterpret_cast<fftw_complex*>(cbuf_), rbuf_,
                                FFTW_ESTIMATE);
}

Spectral::~Spectral() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
  fftw_free(rbuf_);
  fftw_free(cbuf_);
}

void Spectral::forward(const double* in, std::complex<double>* out) {
  std::copy(in, in + real_size_, rbuf_);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_), rbuf_,
                       reinterpret_cast<fftw_complex*>(cbuf_));
  std::copy(cbuf_, cbuf_ + spec_size_, out);
}

void Spectral::inverse(const std::complex<double>* in, double* out) {
  std::copy(in, in + spec_size_, cbuf_);  // c2r destroys its input
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inv_),
                       reinterpret_cast<fftw_complex*>(cbuf_), rbuf_);
  const double scale = 1.0 / static_cast<double>(real_size_);
  for (std::size_t i = 0; i < real_size_; ++i) out[i] = rbuf_[i] * scale;
}

void Spectral::spec_unflatten(std::size_t idx, int out[3]) const {
  out[0] = out[1] = out[2] = 0;
  const int last = dims_[n_ - 1] / 2 + 1;
  out[n_ - 1] = static_cast<int>(idx % static_cast<std::size_t>(last));
  idx /= static_cast<std::size_t>(last);
  for (int a = n_ - 2; a >= 0; --a) {
    out[a] = static_cast<int>(idx % static_cast<std::size_t>(dims_[a]));
    idx /= static_cast<std::size_t>(dims_[a]);
  }
}

double Spectral::parseval_weight(std::size_t idx) const {
  const int last = dims_[n_ - 1] / 2 + 1;
  const int il = static_cast<int>(idx % static_cast<std::size_t>(last));
  return (il == 0 || il == dims_[n_ - 1] / 2) ? 1.0 : 2.0;
}

void Spectral::gradient(const std::vector<double>& f, FluxField& out) {
  forward(f.data(), spec_a_.data());
  int ix[3];
  for (int a = 0; a < n_; ++a) {
    for (std::size_t s = 0; s < spec_size_; ++s) {
      spec_unflatten(s, ix);
      spec_b_[s] = std::complex<double>(0.0, kz_[a][ix[a]]) * spec_a_[s];
    }
    inverse(spec_b_.data(), out.component(a));
  }
}

void Spectral::divergence(const FluxField& w, std::vector<double>& out) {
  std::fill(spec_b_.begin(), spec_b_.end(), std::complex<double>(0.0, 0.0));
  int ix[3];
  for (int a = 0; a < n_; ++a) {
    forward(w.component(a), spec_a_.data());
    for (std::size_t s = 0; s < spec_size_; ++s) {
      spec_unflatten(s, ix);
      spec_b_[s] += std::complex<double>(0.0, kz_[a][ix[a]]) * spec_a_[s];
    }
  }
  out.resize(real_size_);
  inverse(spec_b_.data(), out.data());
}

void Spectral::laplacian(const std::vector<double>& f,
                         std::vector<double>& out) {
  forward(f.data(), spec_a_.data());
  int ix[3];
  for (std::size_t s = 0; s < spec_size_; ++s) {
    spec_unflatten(s, ix);
    double k2 = 0.0;
    for (int a = 0; a < n_; ++a) k2 += kz_[a][ix[a]] * kz_[a][ix[a]];
    spec_a_[s] *= -k2;
  }
  out.resize(real_size_);
  inverse(spec_a_.data(), out.data());
}

void Spectral::poisson_zero_mean(const std::vector<double>& rhs,
                                 std::vector<double>& out) {
  forward(rhs.data(), spec_a_.data());
  int ix[3];
  for (std::size_t s = 0; s < spec_size_; ++s) {
    spec_unflatten(s, ix);
    double k2 = 0.0;
    for (int a = 0; a < n_; ++a) k2 += kz_[a][ix[a]] * kz_[a][ix[a]];
    spec_a_[s] = (k2 > 0.0) ? spec_a_[s] / (-k2) : std::complex<double>(0.0);
  }
  out.resize(real_size_);
  inverse(spec_a_.data(), out.data());
}

void Spectral::add_gradient_of_poisson(const std::vector<double>& rhs,
                                       FluxField& w) {
  forward(rhs.data(), spec_a_.data());
  int ix[3];
  for (std::size_t s = 0; s < spec_size_; ++s) {
    spec_unflatten(s, ix);
    double k2 = 0.0;
    for (int a = 0; a < n_; ++a) k2 += kz_[a][ix[a]] * kz_[a][ix[a]];
    spec_a_[s] = (k2 > 0.0) ? spec_a_[s] / (-k2) : std::complex<double>(0.0);
  }
  std::vector<double> comp(real_size_);
  for (int a = 0; a < n_; ++a) {
    for (std::size_t s = 0; s < spec_size_; ++s) {
      spec_unflatten(s, ix);
      spec_b_[s] = std::complex<double>(0.0, kz_[a][ix[a]]) * spec_a_[s];
    }
    inverse(spec_b_.data(), comp.data());
    double* wa = w.component(a);
    for (std::size_t i = 0; i < real_size_; ++i) wa[i] += comp[i];
  }
}

namespace {

struct SpectralKey {
  int n;
  int dims[3];
  double lengths[3];
  bool operator<(const SpectralKey& o) const {
    if (n != o.n) return n < o.n;
    for (int a = 0; a < 3; ++a) {
      if (dims[a] != o.dims[a]) return dims[a] < o.dims[a];
      if (lengths[a] != o.lengths[a]) return lengths[a] < o.lengths[a];
    }
    return false;
  }
};

Spectral& cached(const SpectralKey& key) {
  thread_local std::map<SpectralKey, std::unique_ptr<Spectral>> cache;
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache
             .emplace(key, std::make_unique<Spectral>(key.n, key.dims,
                                                      key.lengths))
             .first;
  }
  return *it->second;
}

}  // namespace

Spectral& Spectral::for_grid(const Grid& g) {
  SpectralKey key{};
  key.n = g.n;
  for (int a = 0; a < 3; ++a) {
    key.dims[a] = (a < g.n) ? g.N : 1;
    key.lengths[a] = (a < g.n) ? g.L : 1.0;
  }
  return cached(key);
}

Spectral& Spectral::for_padded(const Grid& g) {
  SpectralKey key{};
  key.n = g.n;
  for (int a = 0; a < 3; ++a) {
    key.dims[a] = (a < g.n) ? 2 * g.N : 1;
    key.lengths[a] = (a < g.n) ? 2.0 * g.L : 1.0;
  }
  return cached(key);
}

}  // namespace mfg
