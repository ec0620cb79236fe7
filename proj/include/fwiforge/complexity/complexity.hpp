#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fwiforge/core/array.hpp"
#include "fwiforge/core/types.hpp"

namespace fwiforge::complexity {

struct SobelGradients {
  Array2D gx;  ///< horizontal derivative (right minus left)
  Array2D gy;  ///< vertical derivative (below minus above)
};

/// Classic 3x3 Sobel (weights 1, 2, 1) with edge replication.
SobelGradients sobel_gradients(const Array2D& normalized);

/// Mean of sqrt(gx^2 + gy^2), times scale.
double spatial_information(const Array2D& normalized, double scale = 1.0);

/// Fraction of pixels whose gradient magnitude exceeds eps.
double gradient_sparsity_index(const Array2D& normalized, double eps = 1e-3);

/// Entropy in bits of the velocity histogram with bins of bin_width over
/// [lo, hi]; values outside are clamped into the end bins.
double shannon_entropy(const Array2D& velocity, double bin_width = 60.0,
                       double lo = kPaperVelocityMin, double hi = kPaperVelocityMax);

struct ComplexityOptions {
  double gsi_eps = 1e-3;
  double bin_width = 60.0;
  /// Fixed normalization range; also the entropy histogram range.
  double vmin = kPaperVelocityMin;
  double vmax = kPaperVelocityMax;
  double si_scale = 1.0;
};

struct ComplexityReport {
  double si_mean = 0.0;
  double gsi = 0.0;
  double entropy = 0.0;
};

/// Metrics of one map: Sobel-based ones on (v - vmin) / (vmax - vmin).
ComplexityReport map_complexity(const VelocityMap& map, const ComplexityOptions& options = {});

/// Batch means; DimensionError on an empty batch.
ComplexityReport complexity_report(std::span<const VelocityMap> maps,
                                   const ComplexityOptions& options = {});

/// Bin width from candidates whose batch entropy is closest to target.
double calibrate_bin_width(std::span<const VelocityMap> maps, double target,
                           std::span<const double> candidates,
                           const ComplexityOptions& options = {});

/// "si_mean <v>\ngsi <v>\nentropy <v>\n".
void write_key_value(std::ostream& os, const ComplexityReport& report);
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const std::string& map_id, const ComplexityReport& report);

}  // namespace fwiforge::complexity
