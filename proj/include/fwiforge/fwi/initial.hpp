#pragma once

#include <cstddef>

#include "fwiforge/core/types.hpp"

namespace fwiforge::fwi {

/// Constant map at the minimum of the reference map's surface row.
VelocityMap initial_homogeneous(const VelocityMap& reference);
VelocityMap initial_homogeneous(std::size_t nz, std::size_t nx, double dx, double velocity);

/// Row r = vtop + (vbottom - vtop) r / (nz - 1), constant along x.
/// InvalidRangeError when vbottom < vtop.
VelocityMap initial_linear(double vtop, double vbottom, std::size_t nz, std::size_t nx,
                           double dx = 10.0);

/// kernel x kernel box mean with edge replication. ConfigError unless the
/// kernel is odd and at least 3.
VelocityMap initial_smoothed(const VelocityMap& truth, std::size_t kernel);

}  // namespace fwiforge::fwi
