#include "fwiforge/core/types.hpp"

#include <cmath>
#include <string>

#include "fwiforge/core/errors.hpp"

namespace fwiforge {

VelocityMap::VelocityMap(Array2D values, double dx) : values_(std::move(values)), dx_(dx) {
  if (!(dx_ > 0.0) || !std::isfinite(dx_)) {
    throw ConfigError("VelocityMap: grid spacing must be positive, got " + std::to_string(dx_));
  }
  if (values_.empty()) throw DimensionError("VelocityMap: empty grid");
  for (double v : values_.data()) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw InvalidRangeError("VelocityMap: velocities must be finite and positive, got " +
                              std::to_string(v));
    }
  }
}

VelocityMap::VelocityMap(std::size_t nz, std::size_t nx, double dx, double velocity)
    : VelocityMap(Array2D(nz, nx, velocity), dx) {}

SeismicGather::SeismicGather(std::size_t ns, std::size_t nt, std::size_t nr, double dt)
    : ns_(ns), nt_(nt), nr_(nr), dt_(dt), traces_(ns * nt * nr, 0.0) {}

SeismicGather::SeismicGather(std::size_t ns, std::size_t nt, std::size_t nr, double dt,
                             std::vector<double> traces)
    : ns_(ns), nt_(nt), nr_(nr), dt_(dt), traces_(std::move(traces)) {
  if (traces_.size() != ns * nt * nr) {
    throw DimensionError("SeismicGather: " + std::to_string(traces_.size()) +
                         " samples for shape " + std::to_string(ns) + "x" +
                         std::to_string(nt) + "x" + std::to_string(nr));
  }
}

AcquisitionGeometry AcquisitionGeometry::paper_replica() {
  AcquisitionGeometry g;
  for (std::size_t i = 0; i < 5; ++i) g.sources.push_back({i * 14, 0});
  for (std::size_t i = 0; i < 70; ++i) g.receivers.push_back({i, 0});
  return g;
}

void AcquisitionGeometry::validate(std::size_t nz, std::size_t nx) const {
  if (!(dx > 0.0) || !(dt > 0.0)) throw ConfigError("geometry: dx and dt must be positive");
  if (nbc < 1) throw ConfigError("geometry: absorbing boundary width must be >= 1");
  if (nt_stored > nt_sim) {
    throw ConfigError("geometry: nt_stored (" + std::to_string(nt_stored) +
                      ") exceeds nt_sim (" + std::to_string(nt_sim) + ")");
  }
  if (sources.empty()) throw ConfigError("geometry: no sources");
  if (receivers.empty()) throw ConfigError("geometry: no receivers");
  auto check = [&](const GridPoint& p, const char* kind) {
    if (p.x >= nx || p.z >= nz) {
      throw ConfigError(std::string("geometry: ") + kind + " at cell (" + std::to_string(p.x) +
                        "," + std::to_string(p.z) + ") outside the " + std::to_string(nz) + "x" +
                        std::to_string(nx) + " grid");
    }
  };
  for (const auto& s : sources) check(s, "source");
  for (const auto& r : receivers) check(r, "receiver");
}

}  // namespace fwiforge
