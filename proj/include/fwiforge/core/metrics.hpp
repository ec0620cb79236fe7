#pragma once

#include "fwiforge/core/array.hpp"
#include "fwiforge/core/types.hpp"

namespace fwiforge {

/// Affine map of [lo, hi] onto [-1, 1]: 2 (v - lo) / (hi - lo) - 1.
/// Throws InvalidRangeError when hi <= lo.
Array2D minmax_normalize(const Array2D& field, double lo, double hi);
/// Inverse of minmax_normalize.
Array2D minmax_denormalize(const Array2D& normalized, double lo, double hi);

double mae(const Array2D& a, const Array2D& b);
double rmse(const Array2D& a, const Array2D& b);

struct SsimOptions {
  std::size_t window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  /// Dynamic range; 2 for inputs normalized to [-1, 1].
  double data_range = 2.0;
};

struct SsimResult {
  double value = 0.0;
  std::size_t window = 0;  ///< window actually used
  bool window_shrunk = false;
};

/// Mean local SSIM over every window position fully inside the image
/// (Gaussian weights, population statistics). If either dimension is smaller
/// than the configured window, the window shrinks to that dimension and
/// window_shrunk is set.
SsimResult ssim(const Array2D& a, const Array2D& b, const SsimOptions& options = {});

struct MetricReport {
  double mae = 0.0;
  double rmse = 0.0;
  double ssim = 0.0;
};

/// MAE/RMSE/SSIM between two velocity maps after both are normalized to
/// [-1, 1] with the bounds [lo, hi].
MetricReport compare_velocity(const VelocityMap& truth, const VelocityMap& estimate,
                              double lo = kPaperVelocityMin, double hi = kPaperVelocityMax);

}  // namespace fwiforge
