#include "fwiforge/fwi/initial.hpp"

#include <algorithm>
#include <string>

#include "fwiforge/core/errors.hpp"

namespace fwiforge::fwi {

VelocityMap initial_homogeneous(const VelocityMap& reference) {
  const auto top = reference.values().row(0);
  const double v = *std::min_element(top.begin(), top.end());
  return VelocityMap(reference.nz(), reference.nx(), reference.dx(), v);
}

VelocityMap initial_homogeneous(std::size_t nz, std::size_t nx, double dx, double velocity) {
  return VelocityMap(nz, nx, dx, velocity);
}

VelocityMap initial_linear(double vtop, double vbottom, std::size_t nz, std::size_t nx,
                           double dx) {
  if (vbottom < vtop) {
    throw InvalidRangeError("initial_linear: vbottom " + std::to_string(vbottom) +
                            " is below vtop " + std::to_string(vtop));
  }
  if (nz == 0 || nx == 0) throw DimensionError("initial_linear: empty grid");
  Array2D a(nz, nx);
  for (std::size_t r = 0; r < nz; ++r) {
    const double v = nz == 1 ? vtop
                             : vtop + (vbottom - vtop) * static_cast<double>(r) /
                                          static_cast<double>(nz - 1);
    for (std::size_t c = 0; c < nx; ++c) a(r, c) = v;
  }
  return VelocityMap(std::move(a), dx);
}

VelocityMap initial_smoothed(const VelocityMap& truth, std::size_t kernel) {
  if (kernel < 3 || kernel % 2 == 0) {
    throw ConfigError("initial_smoothed: kernel must be odd and >= 3, got " +
                      std::to_string(kernel));
  }
  const std::size_t nz = truth.nz(), nx = truth.nx();
  const long h = static_cast<long>(kernel / 2);
  auto clampi = [](long v, std::size_t n) {
    return static_cast<std::size_t>(std::clamp<long>(v, 0, static_cast<long>(n) - 1));
  };
  Array2D out(nz, nx);
  const double w = 1.0 / static_cast<double>(kernel * kernel);
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t x = 0; x < nx; ++x) {
      double s = 0.0;
      for (long dz = -h; dz <= h; ++dz) {
        for (long dxx = -h; dxx <= h; ++dxx) {
          s += truth(clampi(static_cast<long>(z) + dz, nz), clampi(static_cast<long>(x) + dxx, nx));
        }
      }
      out(z, x) = std::clamp(s * w, truth.min(), truth.max());
    }
  }
  return VelocityMap(std::move(out), truth.dx());
}

}  // namespace fwiforge::fwi
