#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fwiforge/core/types.hpp"
#include "fwiforge/wave/kernels.hpp"
#include "fwiforge/wave/model.hpp"
#include "fwiforge/wave/ricker.hpp"

namespace fwiforge::wave {

/// Leapfrog solver for p_tt = c^2 (lap p + s) on a sponge-padded model:
///
///   p[n+1] = D (2 p[n] - D p[n-1] + c^2 dt^2 (L4 p[n] + s[n]))
///
/// Point sources are added to the bracket, i.e. scaled by D c^2 dt^2 at the
/// injection cell, which keeps the response linear in s and reciprocal.
class Propagator {
 public:
  Propagator(const PaddedModel& model, double dt, kernels::Kernel kernel = kernels::Kernel::OpenMP);

  /// Zero wavefield, step counter back to 0.
  void reset();

  struct Injection {
    std::size_t cell;  ///< storage index from interior_index()
    double amplitude;
  };

  /// Advances one step adding the given point-source amplitudes.
  void step(std::span<const Injection> sources);
  void step() { step({}); }

  std::size_t steps_taken() const noexcept { return steps_; }

  /// Storage index of an interior cell.
  std::size_t interior_index(GridPoint p) const {
    return grid_.index(p.z + nbc_, p.x + nbc_);
  }
  /// Field after the latest step (p[n+1]), p[n] and p[n-1], storage layout.
  std::span<const double> current() const { return buffers_[cur_]; }
  std::span<const double> previous() const { return buffers_[prev_]; }
  std::span<const double> older() const { return buffers_[next_]; }

  double at(GridPoint p) const { return buffers_[cur_][interior_index(p)]; }

  /// Copies the interior nz x nx block of a storage-layout field.
  void copy_interior(std::span<const double> field, std::span<double> out) const;

  /// NumericalBlowupError if the current field holds a non-finite value.
  void check_finite() const;

  std::size_t nz() const noexcept { return nz_; }
  std::size_t nx() const noexcept { return nx_; }
  const kernels::StencilGrid& grid() const noexcept { return grid_; }

 private:
  std::size_t nz_;
  std::size_t nx_;
  std::size_t nbc_;
  double dt_;
  kernels::Kernel kernel_;
  std::vector<double> kappa_;
  std::vector<double> damp_;
  std::vector<double> inject_scale_;  ///< D c^2 dt^2 per storage cell
  kernels::StencilGrid grid_;
  std::vector<double> buffers_[3];
  int prev_ = 0;
  int cur_ = 1;
  int next_ = 2;
  std::size_t steps_ = 0;
};

struct ForwardOptions {
  kernels::Kernel kernel = kernels::Kernel::OpenMP;
  /// Steps between full-field finiteness checks.
  std::size_t blowup_check_interval = 50;
};

/// Traces of one shot: nt_stored x nr, sample n = field after step n.
/// geom.nt_sim steps are run.
Array2D propagate_shot(const PaddedModel& model, const AcquisitionGeometry& geom,
                       const RickerWavelet& wavelet, std::size_t shot_index,
                       const ForwardOptions& options = {});

/// Every shot of geom (in parallel), after stability and geometry checks.
SeismicGather forward_model(const VelocityMap& map, const AcquisitionGeometry& geom,
                            const RickerWavelet& wavelet, const ForwardOptions& options = {});

}  // namespace fwiforge::wave
