#include "mfg/resample.hpp"

#include <cmath>
#include <numbers>

namespace mfg {

namespace {

// Row of the trigonometric interpolation matrix: value of the interpolant
// basis centered at source index j, evaluated at fractional index t.
// A[t, j] = (1/N)[1 + 2 sum_{k=1}^{N/2-1} cos(2 pi k (t-j)/N)
//                 + cos(pi t) cos(pi j)]
void build_eval_matrix(int N, const std::vector<double>& t,
                       std::vector<double>& A) {
  A.assign(static_cast<std::size_t>(N) * N, 0.0);
  const double invN = 1.0 / N;
  for (int r = 0; r < N; ++r) {
    const double nyq_r = std::cos(std::numbers::pi * t[r]);
    for (int j = 0; j < N; ++j) {
      const double theta = 2.0 * std::numbers::pi * (t[r] - j) * invN;
      // Chebyshev recurrence for sum of cos(k theta), k = 1..N/2-1
      double c1 = std::cos(theta);
      double c0 = 1.0;
      double sum = 0.0;
      double ck = c1;
      for (int k = 1; k <= N / 2 - 1; ++k) {
        sum += ck;
        const double next = 2.0 * c1 * ck - c0;
        c0 = ck;
        ck = next;
      }
      const double nyq_j = (j % 2 == 0) ? 1.0 : -1.0;
      A[static_cast<std::size_t>(r) * N + j] =
          invN * (1.0 + 2.0 * sum + nyq_r * nyq_j);
    }
  }
}

void apply_along_axis(int n, const int dims[3], int axis,
                      const std::vector<double>& A, std::vector<double>& f) {
  const int N = dims[axis];
  std::size_t stride = 1;
  for (int a = axis + 1; a < n; ++a) stride *= dims[a];
  std::size_t outer = 1;
  for (int a = 0; a < axis; ++a) outer *= dims[a];

  std::vector<double> line(N), res(N);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < stride; ++s) {
      const std::size_t base = o * N * stride + s;
      for (int i = 0; i < N; ++i) line[i] = f[base + i * stride];
      for (int r = 0; r < N; ++r) {
        double acc = 0.0;
        const double* row = A.data() + static_cast<std::size_t>(r) * N;
        for (int i = 0; i < N; ++i) acc += row[i] * line[i];
        res[r] = acc;
      }
      for (int r = 0; r < N; ++r) f[base + r * stride] = res[r];
    }
  }
}

}  // namespace

std::vector<double> sample_affine(const Grid& g, const std::vector<double>& f,
                                  double scale, const Point& shift) {
  std::vector<double> out = f;
  int dims[3] = {1, 1, 1};
  for (int a = 0; a < g.n; ++a) dims[a] = g.N;

  std::vector<double> t(g.N), A;
  for (int a = 0; a < g.n; ++a) {
    for (int j = 0; j < g.N; ++j)
      t[j] = scale * (j - g.N / 2) + shift[a] / g.h + g.N / 2;
    build_eval_matrix(g.N, t, A);
    apply_along_axis(g.n, dims, a, A, out);
  }
  return out;
}

DensityField dilate_density(const DensityField& m, double t) {
  DensityField out(m.grid);
  out.values = sample_affine(m.grid, m.values, t, Point{0.0, 0.0, 0.0});
  double tn = 1.0;
  for (int a = 0; a < m.grid.n; ++a) tn *= t;
  double total = 0.0;
  for (double& v : out.values) {
    v = std::max(0.0, v * tn);
    total += v;
  }
  const double target = mass(m);
  if (total > 0.0) {
    const double c = target / (total * m.grid.cell_volume());
    for (double& v : out.values) v *= c;
  }
  return out;
}

FluxField dilate_flux(const FluxField& w, double t) {
  FluxField out(w.grid);
  double tn1 = t;
  for (int a = 0; a < w.grid.n; ++a) tn1 *= t;
  const std::size_t sz = w.grid.size();
  std::vector<double> comp(sz);
  for (int a = 0; a < w.grid.n; ++a) {
    comp.assign(w.component(a), w.component(a) + sz);
    std::vector<double> r =
        sample_affine(w.grid, comp, t, Point{0.0, 0.0, 0.0});
    double* oc = out.component(a);
    for (std::size_t i = 0; i < sz; ++i) oc[i] = r[i] * tn1;
  }
  return out;
}

}  // namespace mfg
