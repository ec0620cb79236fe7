#include "fwiforge/wave/kernels.hpp"

namespace fwiforge::wave::kernels {

void step_reference(const StencilGrid& g, const double* prev, const double* cur, double* next) {
  const std::size_t s = g.stride();
  for (std::size_t i = 0; i < g.rows; ++i) {
    for (std::size_t j = 0; j < g.cols; ++j) {
      const std::size_t c = g.index(i, j);
      const double lap = kCentre2D * cur[c] +
                         kNear * (cur[c - 1] + cur[c + 1] + cur[c - s] + cur[c + s]) +
                         kFar * (cur[c - 2] + cur[c + 2] + cur[c - 2 * s] + cur[c + 2 * s]);
      next[c] = g.damp[c] * (2.0 * cur[c] - g.damp[c] * prev[c] + g.kappa[c] * lap);
    }
  }
}

void step_openmp(const StencilGrid& g, const double* prev, const double* cur, double* next) {
  const long rows = static_cast<long>(g.rows);
  const std::size_t cols = g.cols;
  const std::size_t s = g.stride();
#pragma omp parallel for schedule(static)
  for (long i = 0; i < rows; ++i) {
    const std::size_t base = g.index(static_cast<std::size_t>(i), 0);
    const double* __restrict u = cur + base;
    const double* __restrict um = prev + base;
    const double* __restrict k = g.kappa + base;
    const double* __restrict d = g.damp + base;
    double* __restrict out = next + base;
    const double* __restrict up1 = u - s;
    const double* __restrict dn1 = u + s;
    const double* __restrict up2 = u - 2 * s;
    const double* __restrict dn2 = u + 2 * s;
#pragma omp simd
    for (std::size_t j = 0; j < cols; ++j) {
      const double lap = kCentre2D * u[j] + kNear * (u[j - 1] + u[j + 1] + up1[j] + dn1[j]) +
                         kFar * (u[j - 2] + u[j + 2] + up2[j] + dn2[j]);
      out[j] = d[j] * (2.0 * u[j] - d[j] * um[j] + k[j] * lap);
    }
  }
}

void correlate_reference(std::size_t n, const double* adj, const double* u_next,
                         const double* u_cur, const double* u_prev, double* acc) {
  for (std::size_t c = 0; c < n; ++c) {
    acc[c] += adj[c] * (u_next[c] - 2.0 * u_cur[c] + u_prev[c]);
  }
}

void correlate_openmp(std::size_t n, const double* adj, const double* u_next,
                      const double* u_cur, const double* u_prev, double* acc) {
  const long count = static_cast<long>(n);
#pragma omp parallel for simd schedule(static)
  for (long c = 0; c < count; ++c) {
    acc[c] += adj[c] * (u_next[c] - 2.0 * u_cur[c] + u_prev[c]);
  }
}

}  // namespace fwiforge::wave::kernels
