#pragma once

#include <cstddef>

namespace fwiforge::wave::kernels {

/// 4th-order second-derivative weights (-1/12, 4/3, -5/2, 4/3, -1/12).
inline constexpr double kNear = 4.0 / 3.0;
inline constexpr double kFar = -1.0 / 12.0;
inline constexpr double kCentre2D = -5.0;  ///< -5/2 on each of the two axes

/// Stencil storage: an active rows x cols grid surrounded by a 2-cell ghost
/// ring of zeros, so every buffer has (rows + 4) x (cols + 4) entries with
/// row stride cols + 4. Active cell (i, j) lives at (i + 2) * stride + j + 2.
struct StencilGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  const double* kappa = nullptr;  ///< c^2 dt^2 / dx^2, storage layout
  const double* damp = nullptr;   ///< sponge factors, storage layout

  static constexpr std::size_t kGhost = 2;
  std::size_t stride() const noexcept { return cols + 2 * kGhost; }
  std::size_t storage_size() const noexcept { return (rows + 2 * kGhost) * stride(); }
  std::size_t index(std::size_t i, std::size_t j) const noexcept {
    return (i + kGhost) * stride() + j + kGhost;
  }
};

enum class Kernel { Reference, OpenMP };

/// next = damp * (2 cur - damp * prev + kappa * L4 cur) on every active cell.
/// Straightforward serial loop kept as the ground truth for step_openmp.
void step_reference(const StencilGrid& g, const double* prev, const double* cur, double* next);

/// Same update, rows distributed over OpenMP threads. Bitwise identical to
/// step_reference for any thread count (no reductions).
void step_openmp(const StencilGrid& g, const double* prev, const double* cur, double* next);

inline void step(Kernel k, const StencilGrid& g, const double* prev, const double* cur,
                 double* next) {
  if (k == Kernel::Reference) {
    step_reference(g, prev, cur, next);
  } else {
    step_openmp(g, prev, cur, next);
  }
}

/// acc[c] += adj[c] * (u_next[c] - 2 u_cur[c] + u_prev[c]) over n contiguous cells.
void correlate_reference(std::size_t n, const double* adj, const double* u_next,
                         const double* u_cur, const double* u_prev, double* acc);
void correlate_openmp(std::size_t n, const double* adj, const double* u_next,
                      const double* u_cur, const double* u_prev, double* acc);

}  // namespace fwiforge::wave::kernels
