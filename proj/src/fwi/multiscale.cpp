#include "fwiforge/fwi/multiscale.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <string>

#include "fwiforge/core/errors.hpp"
#include "fwiforge/fwi/lowpass.hpp"

namespace fwiforge::fwi {

void InversionConfig::validate() const {
  if (cutoffs.empty()) throw ConfigError("inversion: cutoff schedule is empty");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] > 0.0)) throw ConfigError("inversion: cutoffs must be positive");
    if (i > 0 && !(cutoffs[i] > cutoffs[i - 1])) {
      throw ConfigError("inversion: cutoffs must be strictly increasing");
    }
  }
  if (!(stop_rel_loss_change > 0.0 && stop_rel_loss_change < 1.0)) {
    throw ConfigError("inversion: stop_rel_loss_change must lie in (0, 1)");
  }
  if (!(line_search.initial_step > 0.0)) {
    throw ConfigError("inversion: line-search initial step must be positive");
  }
  if (!(vmax > vmin) || !(vmin > 0.0)) {
    throw ConfigError("inversion: velocity bounds must satisfy 0 < vmin < vmax");
  }
  if (!(precondition_eps > 0.0)) throw ConfigError("inversion: precondition_eps must be positive");
}

namespace {

class VelocityObjective final : public Objective {
 public:
  VelocityObjective(FwiEvaluator& eval, std::size_t nz, std::size_t nx, double dx,
                    const InversionConfig& config)
      : eval_(eval), nz_(nz), nx_(nx), dx_(dx), config_(config) {}

  double value(std::span<const double> x) override { return eval_.loss(to_map(x)); }

  double value_and_gradient(std::span<const double> x, std::span<double> grad) override {
    GradientResult r = eval_.gradient(to_map(x));
    std::copy(r.gradient.values().begin(), r.gradient.values().end(), grad.begin());
    illumination_ = r.illumination.values();
    return r.loss;
  }

  void precondition(std::span<const double>, std::span<double> grad) override {
    if (!config_.precondition || illumination_.empty()) return;
    const double peak = *std::max_element(illumination_.begin(), illumination_.end());
    if (!(peak > 0.0)) return;
    const double floor = config_.precondition_eps * peak;
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] *= peak / (illumination_[i] + floor);
  }

 private:
  VelocityMap to_map(std::span<const double> x) const {
    return VelocityMap(Array2D(nz_, nx_, std::vector<double>(x.begin(), x.end())), dx_);
  }

  FwiEvaluator& eval_;
  std::size_t nz_, nx_;
  double dx_;
  const InversionConfig& config_;
  std::vector<double> illumination_;
};

}  // namespace

StageResult cg_stage(const VelocityMap& map0, const AcquisitionGeometry& geom,
                     const RickerWavelet& wavelet, const SeismicGather& obs_filtered,
                     double cutoff, const InversionConfig& config) {
  config.validate();
  if (map0.min() < config.vmin || map0.max() > config.vmax) {
    throw InvalidRangeError("cg_stage: starting map leaves [" + std::to_string(config.vmin) +
                            ", " + std::to_string(config.vmax) + "]");
  }
  const auto t0 = std::chrono::steady_clock::now();
  std::optional<ZeroPhaseLowpass> filter;
  if (cutoff > 0.0) filter.emplace(cutoff, geom.dt);
  FwiEvaluator eval(geom, wavelet, obs_filtered, filter, config.gradient);
  VelocityObjective objective(eval, map0.nz(), map0.nx(), map0.dx(), config);

  CgOptions opts;
  opts.max_iters = config.max_iters_per_stage;
  opts.stop_rel_loss_change = config.stop_rel_loss_change;
  opts.initial_step = config.line_search.initial_step;
  opts.max_step_halvings = config.line_search.max_step_halvings;
  opts.armijo = config.line_search.armijo;
  opts.refine_step = config.line_search.refine_step;
  opts.lower = config.vmin;
  opts.upper = config.vmax;

  const auto& v = map0.values().values();
  CgResult cg = minimize_cg(objective, std::vector<double>(v.begin(), v.end()), opts);

  StageResult out{VelocityMap(Array2D(map0.nz(), map0.nx(), std::move(cg.x)), map0.dx()), {}};
  out.trace.cutoff = cutoff;
  out.trace.iterations = std::move(cg.history);
  out.trace.reason = cg.reason;
  out.trace.stalled = cg.reason == StopReason::Stalled;
  out.trace.final_rel_change = cg.final_rel_change;
  out.trace.forward_runs = eval.forward_runs();
  out.trace.adjoint_runs = eval.adjoint_runs();
  out.trace.final_map = out.map;
  out.trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

InversionResult multiscale_fwi(const VelocityMap& map0, const SeismicGather& obs,
                               const AcquisitionGeometry& geom, const RickerWavelet& wavelet,
                               const InversionConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  InversionResult out{map0, {}};
  for (double cutoff : config.cutoffs) {
    const SeismicGather filtered = lowpass(obs, cutoff);
    StageResult stage = cg_stage(out.map, geom, wavelet, filtered, cutoff, config);
    out.map = std::move(stage.map);
    out.trace.stages.push_back(std::move(stage.trace));
  }
  out.trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

void write_trace_csv(std::ostream& os, const InversionTrace& trace) {
  os << "stage,cutoff_hz,iteration,loss,rel_change,max_update,evaluations,restarted\n";
  const auto prec = os.precision(10);
  for (std::size_t s = 0; s < trace.stages.size(); ++s) {
    const StageTrace& st = trace.stages[s];
    for (const CgIteration& it : st.iterations) {
      os << s << ',' << st.cutoff << ',' << it.iteration << ',' << it.loss << ','
         << it.rel_change << ',' << it.max_update << ',' << it.evaluations << ','
         << (it.restarted ? 1 : 0) << '\n';
    }
  }
  os.precision(prec);
}

}  // namespace fwiforge::fwi
