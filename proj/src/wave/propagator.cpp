#include "fwiforge/wave/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fwiforge/core/errors.hpp"
#include "fwiforge/core/parallel.hpp"

namespace fwiforge::wave {

Propagator::Propagator(const PaddedModel& model, double dt, kernels::Kernel kernel)
    : nz_(model.nz), nx_(model.nx), nbc_(model.nbc), dt_(dt), kernel_(kernel) {
  grid_.rows = model.rows();
  grid_.cols = model.cols();
  const std::size_t n = grid_.storage_size();
  kappa_.assign(n, 0.0);
  damp_.assign(n, 0.0);
  inject_scale_.assign(n, 0.0);
  const double r = dt_ / model.dx;
  for (std::size_t i = 0; i < grid_.rows; ++i) {
    for (std::size_t j = 0; j < grid_.cols; ++j) {
      const std::size_t c = grid_.index(i, j);
      const double v = model.velocity(i, j);
      kappa_[c] = v * v * r * r;
      damp_[c] = model.damping(i, j);
      inject_scale_[c] = damp_[c] * v * v * dt_ * dt_;
    }
  }
  grid_.kappa = kappa_.data();
  grid_.damp = damp_.data();
  for (auto& b : buffers_) b.assign(n, 0.0);
}

void Propagator::reset() {
  for (auto& b : buffers_) std::fill(b.begin(), b.end(), 0.0);
  prev_ = 0;
  cur_ = 1;
  next_ = 2;
  steps_ = 0;
}

void Propagator::step(std::span<const Injection> sources) {
  double* next = buffers_[next_].data();
  kernels::step(kernel_, grid_, buffers_[prev_].data(), buffers_[cur_].data(), next);
  for (const auto& s : sources) next[s.cell] += inject_scale_[s.cell] * s.amplitude;
  const int old_prev = prev_;
  prev_ = cur_;
  cur_ = next_;
  next_ = old_prev;
  ++steps_;
}

void Propagator::copy_interior(std::span<const double> field, std::span<double> out) const {
  for (std::size_t z = 0; z < nz_; ++z) {
    const double* row = field.data() + grid_.index(z + nbc_, nbc_);
    std::copy(row, row + nx_, out.data() + z * nx_);
  }
}

void Propagator::check_finite() const {
  for (double v : buffers_[cur_]) {
    if (!std::isfinite(v)) {
      throw NumericalBlowupError(steps_, "numerical blowup: non-finite wavefield at step " +
                                             std::to_string(steps_));
    }
  }
}

Array2D propagate_shot(const PaddedModel& model, const AcquisitionGeometry& geom,
                       const RickerWavelet& wavelet, std::size_t shot_index,
                       const ForwardOptions& options) {
  if (shot_index >= geom.sources.size()) {
    throw ConfigError("propagate_shot: shot " + std::to_string(shot_index) + " of " +
                      std::to_string(geom.sources.size()));
  }
  Propagator prop(model, geom.dt, options.kernel);
  const std::size_t nr = geom.receivers.size();
  std::vector<std::size_t> rec_cells(nr);
  for (std::size_t r = 0; r < nr; ++r) rec_cells[r] = prop.interior_index(geom.receivers[r]);

  Array2D traces(geom.nt_stored, nr);
  Propagator::Injection src{prop.interior_index(geom.sources[shot_index]), 0.0};
  const std::size_t interval = std::max<std::size_t>(1, options.blowup_check_interval);
  for (std::size_t n = 0; n < geom.nt_sim; ++n) {
    src.amplitude = n < wavelet.nt() ? geom.source_gain * wavelet.samples[n] : 0.0;
    prop.step({&src, 1});
    if (n < geom.nt_stored) {
      const auto field = prop.current();
      auto row = traces.row(n);
      for (std::size_t r = 0; r < nr; ++r) row[r] = field[rec_cells[r]];
    }
    if ((n + 1) % interval == 0 || n + 1 == geom.nt_sim) prop.check_finite();
  }
  return traces;
}

SeismicGather forward_model(const VelocityMap& map, const AcquisitionGeometry& geom,
                            const RickerWavelet& wavelet, const ForwardOptions& options) {
  geom.validate(map.nz(), map.nx());
  check_stability(map, geom);
  const PaddedModel model = pad_with_sponge(map, geom.nbc, geom.sponge_decay);
  const std::size_t ns = geom.sources.size();
  const std::size_t nr = geom.receivers.size();
  SeismicGather gather(ns, geom.nt_stored, nr, geom.dt);
  parallel_for(ns, [&](std::size_t s) {
    const Array2D traces = propagate_shot(model, geom, wavelet, s, options);
    std::copy(traces.data().begin(), traces.data().end(), gather.shot(s).begin());
  });
  return gather;
}

}  // namespace fwiforge::wave
