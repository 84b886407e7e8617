#ifndef MFG_FFT_HPP
#define MFG_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "mfg/core.hpp"

namespace mfg {

/// Real-to-complex spectral workspace for one set of dimensions.
///
/// All derivative operators use Nyquist-zeroed wavenumbers so that the
/// discrete Laplacian equals div(grad(.)) exactly and the Fokker-Planck
/// constraint is an exact linear subspace. Instances own their FFTW plans
/// and scratch buffers and are not shareable across threads; use for_grid /
/// for_padded, which hand out thread-local cached instances.
class Spectral {
 public:
  Spectral(int n, const int* dims, const double* lengths);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  static Spectral& for_grid(const Grid& g);
  static Spectral& for_padded(const Grid& g);  // doubled box, 2N per axis

  std::size_t real_size() const { return real_size_; }
  std::size_t spec_size() const { return spec_size_; }
  int dim(int a) const { return dims_[a]; }
  int rank() const { return n_; }

  /// Unnormalized forward DFT of a real field.
  void forward(const double* in, std::complex<double>* out);
  /// Inverse transform including the 1/size normalization.
  void inverse(const std::complex<double>* in, double* out);

  /// Nyquist-zeroed wavenumber along axis a for spectral index component i.
  double kz(int a, int i) const { return kz_[a][i]; }
  /// Decompose a flat half-spectrum index into per-axis components.
  void spec_unflatten(std::size_t idx, int out[3]) const;
  /// Multiplicity of a half-spectrum bin in Parseval sums (1 or 2).
  double parseval_weight(std::size_t idx) const;

  void gradient(const std::vector<double>& f, FluxField& out);
  void divergence(const FluxField& w, std::vector<double>& out);
  void laplacian(const std::vector<double>& f, std::vector<double>& out);
  /// Zero-mean solution of laplacian(u) = rhs; null modes projected out.
  void poisson_zero_mean(const std::vector<double>& rhs,
                         std::vector<double>& out);

  /// w += grad(chi) with laplacian(chi) = rhs, done in one spectral pass.
  void add_gradient_of_poisson(const std::vector<double>& rhs, FluxField& w);

 private:
  int n_ = 0;
  int dims_[3] = {1, 1, 1};
  std::size_t real_size_ = 0;
  std::size_t spec_size_ = 0;
  std::vector<std::vector<double>> kz_;
  void* plan_fwd_ = nullptr;
  void* plan_inv_ = nullptr;
  double* rbuf_ = nullptr;
  std::complex<double>* cbuf_ = nullptr;
  std::vector<std::complex<double>> spec_a_, spec_b_;
};

}  // namespace mfg

#endif
