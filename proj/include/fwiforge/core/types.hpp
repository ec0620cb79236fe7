#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fwiforge/core/array.hpp"

namespace fwiforge {

/// Velocity bounds shared by the Vel/Fault/Style dataset families (m/s).
inline constexpr double kPaperVelocityMin = 1500.0;
inline constexpr double kPaperVelocityMax = 4500.0;

/// Acoustic velocity on an nz x nx grid (depth-major), spacing dx metres.
/// Every value is finite and strictly positive.
class VelocityMap {
 public:
  VelocityMap(Array2D values, double dx);
  /// Homogeneous map.
  VelocityMap(std::size_t nz, std::size_t nx, double dx, double velocity);

  std::size_t nz() const noexcept { return values_.rows(); }
  std::size_t nx() const noexcept { return values_.cols(); }
  double dx() const noexcept { return dx_; }
  const Array2D& values() const noexcept { return values_; }
  double operator()(std::size_t z, std::size_t x) const { return values_(z, x); }
  double min() const { return values_.min(); }
  double max() const { return values_.max(); }

  bool operator==(const VelocityMap&) const = default;

 private:
  Array2D values_;
  double dx_;
};

/// Pressure traces laid out [shot][time][receiver].
class SeismicGather {
 public:
  SeismicGather() = default;
  SeismicGather(std::size_t ns, std::size_t nt, std::size_t nr, double dt);
  SeismicGather(std::size_t ns, std::size_t nt, std::size_t nr, double dt,
                std::vector<double> traces);

  std::size_t ns() const noexcept { return ns_; }
  std::size_t nt() const noexcept { return nt_; }
  std::size_t nr() const noexcept { return nr_; }
  double dt() const noexcept { return dt_; }

  double& at(std::size_t s, std::size_t t, std::size_t r) {
    return traces_[(s * nt_ + t) * nr_ + r];
  }
  double at(std::size_t s, std::size_t t, std::size_t r) const {
    return traces_[(s * nt_ + t) * nr_ + r];
  }

  /// nt x nr block of one shot.
  std::span<double> shot(std::size_t s) { return {traces_.data() + s * nt_ * nr_, nt_ * nr_}; }
  std::span<const double> shot(std::size_t s) const {
    return {traces_.data() + s * nt_ * nr_, nt_ * nr_};
  }
  std::span<double> data() noexcept { return traces_; }
  std::span<const double> data() const noexcept { return traces_; }

  bool same_shape(const SeismicGather& o) const noexcept {
    return ns_ == o.ns_ && nt_ == o.nt_ && nr_ == o.nr_;
  }
  bool operator==(const SeismicGather&) const = default;

 private:
  std::size_t ns_ = 0;
  std::size_t nt_ = 0;
  std::size_t nr_ = 0;
  double dt_ = 0.0;
  std::vector<double> traces_;
};

struct GridPoint {
  std::size_t x = 0;  ///< column
  std::size_t z = 0;  ///< row (depth)
  bool operator==(const GridPoint&) const = default;
};

struct AcquisitionGeometry {
  double dx = 10.0;
  double dt = 0.001;
  std::size_t nt_sim = 1001;
  std::size_t nt_stored = 1000;
  std::size_t nbc = 120;
  std::vector<GridPoint> sources;
  std::vector<GridPoint> receivers;
  double source_freq = 15.0;
  double source_gain = 1.0;
  double sponge_decay = 3.0;

  /// 5 surface shots at cells {0,14,28,42,56}, 70 surface receivers at cells 0..69.
  /// Cell i is centred at (i + 1) * dx metres, matching the 1-based acquisition script.
  static AcquisitionGeometry paper_replica();

  /// Throws ConfigError if any position falls outside [0,nx) x [0,nz) or the
  /// timing/boundary fields are inconsistent.
  void validate(std::size_t nz, std::size_t nx) const;
};

}  // namespace fwiforge
