#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "fwiforge/core/types.hpp"
#include "fwiforge/fwi/cg.hpp"
#include "fwiforge/fwi/gradient.hpp"

namespace fwiforge::fwi {

struct LineSearchConfig {
  std::size_t max_step_halvings = 8;
  double initial_step = 50.0;  ///< m/s, largest cell change of the first trial
  double armijo = 1e-4;
  bool refine_step = true;
};

struct InversionConfig {
  std::vector<double> cutoffs{1.0, 3.0, 5.0, 10.0, 20.0, 30.0};
  std::size_t max_iters_per_stage = 20;
  double stop_rel_loss_change = 1e-3;
  LineSearchConfig line_search;
  double vmin = kPaperVelocityMin;
  double vmax = kPaperVelocityMax;
  /// Scale the gradient by 1 / (illumination + eps * max illumination).
  bool precondition = true;
  double precondition_eps = 1e-2;
  GradientOptions gradient;

  /// ConfigError on empty or non-increasing cutoffs, a stop fraction outside
  /// (0, 1), non-positive step or vmax <= vmin.
  void validate() const;
};

struct StageTrace {
  double cutoff = 0.0;
  std::vector<CgIteration> iterations;  ///< [0] is the stage start
  StopReason reason = StopReason::MaxIterations;
  bool stalled = false;
  double final_rel_change = 0.0;
  std::size_t forward_runs = 0;
  std::size_t adjoint_runs = 0;
  double wall_seconds = 0.0;
  VelocityMap final_map{1, 1, 1.0, 1.0};
};

struct InversionTrace {
  std::vector<StageTrace> stages;
  double wall_seconds = 0.0;
};

struct StageResult {
  VelocityMap map;
  StageTrace trace;
};

struct InversionResult {
  VelocityMap map;
  InversionTrace trace;
};

/// One CG stage on data that are already low-passed at `cutoff` (<= 0 means
/// unfiltered). The predicted data go through the same filter.
StageResult cg_stage(const VelocityMap& map0, const AcquisitionGeometry& geom,
                     const RickerWavelet& wavelet, const SeismicGather& obs_filtered,
                     double cutoff, const InversionConfig& config);

/// Runs cg_stage for every cutoff in order, warm-starting each stage.
InversionResult multiscale_fwi(const VelocityMap& map0, const SeismicGather& obs,
                               const AcquisitionGeometry& geom, const RickerWavelet& wavelet,
                               const InversionConfig& config);

/// stage,cutoff_hz,iteration,loss,rel_change,max_update,evaluations,restarted
void write_trace_csv(std::ostream& os, const InversionTrace& trace);

}  // namespace fwiforge::fwi
