#include "fwiforge/wave/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fwiforge/core/errors.hpp"

namespace fwiforge::wave {

double courant_number(double c_max, double dt, double dx) { return c_max * dt / dx; }

double check_stability(const VelocityMap& map, const AcquisitionGeometry& geom) {
  const double c_max = map.max();
  const double courant = courant_number(c_max, geom.dt, geom.dx);
  if (courant > kMaxCourant) {
    std::ostringstream msg;
    msg << "unstable time step: Courant number c_max*dt/dx = " << c_max << "*" << geom.dt << "/"
        << geom.dx << " = " << courant << " exceeds " << kMaxCourant;
    throw StabilityError(msg.str());
  }
  return courant;
}

PaddedModel pad_with_sponge(const VelocityMap& map, std::size_t nbc, double decay) {
  if (nbc < 1) throw ConfigError("pad_with_sponge: nbc must be >= 1");
  PaddedModel m;
  m.nz = map.nz();
  m.nx = map.nx();
  m.nbc = nbc;
  m.dx = map.dx();
  const std::size_t rows = m.nz + 2 * nbc;
  const std::size_t cols = m.nx + 2 * nbc;
  m.velocity = Array2D(rows, cols);
  m.damping = Array2D(rows, cols);

  const double width = static_cast<double>(nbc);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t zi = std::clamp(i, nbc, nbc + m.nz - 1) - nbc;
    const std::size_t dz = std::min(i, rows - 1 - i);
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t xj = std::clamp(j, nbc, nbc + m.nx - 1) - nbc;
      m.velocity(i, j) = map(zi, xj);
      const std::size_t d = std::min({dz, j, cols - 1 - j});
      if (d >= nbc) {
        m.damping(i, j) = 1.0;
      } else {
        const double r = decay * (width - static_cast<double>(d)) / width;
        m.damping(i, j) = std::exp(-r * r);
      }
    }
  }
  return m;
}

}  // namespace fwiforge::wave
