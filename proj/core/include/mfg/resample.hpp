#ifndef MFG_RESAMPLE_HPP
#define MFG_RESAMPLE_HPP

#include <vector>

#include "mfg/core.hpp"

namespace mfg {

/// Band-limited (trigonometric) evaluation of a periodic grid field at the
/// points scale*x + shift, returned on the same grid. Exact for fields whose
/// spectrum the grid resolves; the Nyquist mode is treated as a cosine so
/// real fields stay real.
std::vector<double> sample_affine(const Grid& g, const std::vector<double>& f,
                                  double scale, const Point& shift);

/// Dilated density t^n m(t x): mass-preserving in the continuum. Negative
/// interpolation ringing is clipped at zero and the discrete mass is restored
/// exactly by rescaling.
DensityField dilate_density(const DensityField& m, double t);

/// Dilated flux t^{n+1} w(t x).
FluxField dilate_flux(const FluxField& w, double t);

}  // namespace mfg

#endif
