#pragma once

#include <cstddef>

#include "fwiforge/core/array.hpp"
#include "fwiforge/core/types.hpp"

namespace fwiforge::wave {

/// Largest accepted c_max dt / dx for the 2-4 leapfrog scheme in 2D
/// (sqrt(3/8) = 0.6124, rounded down).
inline constexpr double kMaxCourant = 0.606;

double courant_number(double c_max, double dt, double dx);

/// Returns the Courant number of map under geom; throws StabilityError naming
/// c_max, dt and dx when it exceeds kMaxCourant.
double check_stability(const VelocityMap& map, const AcquisitionGeometry& geom);

/// Interior map embedded in an absorbing sponge nbc cells wide on every side.
/// Sponge velocities replicate the nearest interior cell; damping is 1 in the
/// interior and exp(-(decay (nbc - d) / nbc)^2) at distance d from the outer edge.
struct PaddedModel {
  std::size_t nz = 0;   ///< interior rows
  std::size_t nx = 0;   ///< interior columns
  std::size_t nbc = 0;
  double dx = 0.0;
  Array2D velocity;     ///< (nz + 2 nbc) x (nx + 2 nbc)
  Array2D damping;      ///< same shape, values in (0, 1]

  std::size_t rows() const noexcept { return velocity.rows(); }
  std::size_t cols() const noexcept { return velocity.cols(); }
};

PaddedModel pad_with_sponge(const VelocityMap& map, std::size_t nbc, double decay);

}  // namespace fwiforge::wave
