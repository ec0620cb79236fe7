#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "fwiforge/core/array.hpp"
#include "fwiforge/core/types.hpp"
#include "fwiforge/fwi/lowpass.hpp"
#include "fwiforge/wave/kernels.hpp"
#include "fwiforge/wave/ricker.hpp"

namespace fwiforge::fwi {

using wave::RickerWavelet;

struct GradientOptions {
  wave::kernels::Kernel kernel = wave::kernels::Kernel::OpenMP;
  /// Rows from the surface whose gradient is forced to zero (source and
  /// receiver footprint).
  std::size_t mask_top_rows = 2;
};

struct GradientResult {
  double loss = 0.0;
  Array2D gradient;      ///< dJ/dc, nz x nx, m/s units
  Array2D illumination;  ///< sum over shots and steps of (u_tt dt^2)^2
};

/// Objective J(c) = 0.5 || F P(c) - d ||^2 where P is the forward model
/// truncated to geom.nt_stored samples, F the zero-phase low-pass (identity
/// when no filter is given) and d = obs_filtered.
///
/// The gradient is the exact derivative of the discrete forward scheme with
/// respect to the interior velocities: the adjoint field is driven by
/// F^T (F P(c) - d) time-reversed at the receivers and correlated with the
/// stored second time differences of the forward field.
GradientResult gradient_adjoint(const VelocityMap& map, const AcquisitionGeometry& geom,
                                const RickerWavelet& wavelet, const SeismicGather& obs_filtered,
                                const ZeroPhaseLowpass* filter = nullptr,
                                const GradientOptions& options = {});

/// Loss only; runs geom.nt_stored forward steps per shot.
double loss_only(const VelocityMap& map, const AcquisitionGeometry& geom,
                 const RickerWavelet& wavelet, const SeismicGather& obs_filtered,
                 const ZeroPhaseLowpass* filter = nullptr, const GradientOptions& options = {});

/// Caches the forward history of the last evaluated model so that a gradient
/// request at an accepted line-search trial costs only the adjoint pass.
class FwiEvaluator {
 public:
  FwiEvaluator(AcquisitionGeometry geom, RickerWavelet wavelet, SeismicGather obs_filtered,
               std::optional<ZeroPhaseLowpass> filter, GradientOptions options = {});
  ~FwiEvaluator();
  FwiEvaluator(const FwiEvaluator&) = delete;
  FwiEvaluator& operator=(const FwiEvaluator&) = delete;

  double loss(const VelocityMap& map);
  GradientResult gradient(const VelocityMap& map);

  std::size_t forward_runs() const noexcept { return forward_runs_; }
  std::size_t adjoint_runs() const noexcept { return adjoint_runs_; }

  struct ShotState;

 private:
  void forward(const VelocityMap& map);

  AcquisitionGeometry geom_;
  RickerWavelet wavelet_;
  SeismicGather obs_;
  std::optional<ZeroPhaseLowpass> filter_;
  GradientOptions options_;
  std::vector<std::unique_ptr<ShotState>> shots_;
  std::optional<VelocityMap> cached_map_;
  double cached_loss_ = 0.0;
  std::size_t forward_runs_ = 0;
  std::size_t adjoint_runs_ = 0;
};

}  // namespace fwiforge::fwi
