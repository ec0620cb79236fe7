#include "fwiforge/fwi/gradient.hpp"

#include <algorithm>
#include <string>

#include "fwiforge/core/errors.hpp"
#include "fwiforge/core/parallel.hpp"
#include "fwiforge/wave/model.hpp"
#include "fwiforge/wave/propagator.hpp"

namespace fwiforge::fwi {

using wave::Propagator;

struct FwiEvaluator::ShotState {
  /// Interior snapshots, slot k holds u^{k-1} (k = 0 is u^{-1} = 0, k = 1 is u^0 = 0).
  std::vector<double> history;
  /// Filtered prediction minus observation, [t][r].
  std::vector<double> residual;
  double loss = 0.0;
};

namespace {

// Column r of an [t][r] block through the filter (or a plain copy).
void filter_columns(const ZeroPhaseLowpass* filter, bool transpose, std::size_t nt,
                    std::size_t nr, std::span<const double> in, std::span<double> out) {
  if (filter == nullptr) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  std::vector<double> a(nt), b(nt);
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t t = 0; t < nt; ++t) a[t] = in[t * nr + r];
    if (transpose) {
      filter->apply_transpose(a, b);
    } else {
      filter->apply(a, b);
    }
    for (std::size_t t = 0; t < nt; ++t) out[t * nr + r] = b[t];
  }
}

void check_obs(const AcquisitionGeometry& geom, const SeismicGather& obs) {
  if (obs.ns() != geom.sources.size() || obs.nt() != geom.nt_stored ||
      obs.nr() != geom.receivers.size()) {
    throw DimensionError("observed gather is " + std::to_string(obs.ns()) + "x" +
                         std::to_string(obs.nt()) + "x" + std::to_string(obs.nr()) +
                         ", geometry expects " + std::to_string(geom.sources.size()) + "x" +
                         std::to_string(geom.nt_stored) + "x" +
                         std::to_string(geom.receivers.size()));
  }
}

}  // namespace

FwiEvaluator::FwiEvaluator(AcquisitionGeometry geom, RickerWavelet wavelet,
                           SeismicGather obs_filtered, std::optional<ZeroPhaseLowpass> filter,
                           GradientOptions options)
    : geom_(std::move(geom)),
      wavelet_(std::move(wavelet)),
      obs_(std::move(obs_filtered)),
      filter_(std::move(filter)),
      options_(options) {
  check_obs(geom_, obs_);
}

FwiEvaluator::~FwiEvaluator() = default;

void FwiEvaluator::forward(const VelocityMap& map) {
  geom_.validate(map.nz(), map.nx());
  wave::check_stability(map, geom_);
  const wave::PaddedModel model = wave::pad_with_sponge(map, geom_.nbc, geom_.sponge_decay);
  const std::size_t ns = geom_.sources.size();
  const std::size_t nr = geom_.receivers.size();
  const std::size_t nt = geom_.nt_stored;
  const std::size_t cells = map.nz() * map.nx();
  const ZeroPhaseLowpass* filter = filter_ ? &*filter_ : nullptr;

  shots_.resize(ns);
  for (auto& s : shots_) {
    if (!s) s = std::make_unique<ShotState>();
  }
  cached_map_.reset();

  parallel_for(ns, [&](std::size_t s) {
    ShotState& st = *shots_[s];
    st.history.assign((nt + 2) * cells, 0.0);
    std::vector<double> pred(nt * nr);
    Propagator prop(model, geom_.dt, options_.kernel);
    std::vector<std::size_t> rec(nr);
    for (std::size_t r = 0; r < nr; ++r) rec[r] = prop.interior_index(geom_.receivers[r]);
    Propagator::Injection src{prop.interior_index(geom_.sources[s]), 0.0};
    for (std::size_t n = 0; n < nt; ++n) {
      src.amplitude = n < wavelet_.nt() ? geom_.source_gain * wavelet_.samples[n] : 0.0;
      prop.step({&src, 1});
      const auto field = prop.current();
      for (std::size_t r = 0; r < nr; ++r) pred[n * nr + r] = field[rec[r]];
      prop.copy_interior(field, {st.history.data() + (n + 2) * cells, cells});
      if ((n + 1) % 50 == 0 || n + 1 == nt) prop.check_finite();
    }
    st.residual.assign(nt * nr, 0.0);
    filter_columns(filter, false, nt, nr, pred, st.residual);
    const auto obs = obs_.shot(s);
    double loss = 0.0;
    for (std::size_t i = 0; i < st.residual.size(); ++i) {
      st.residual[i] -= obs[i];
      loss += st.residual[i] * st.residual[i];
    }
    st.loss = 0.5 * loss;
  });

  double total = 0.0;
  for (const auto& s : shots_) total += s->loss;
  cached_loss_ = total;
  cached_map_ = map;
  ++forward_runs_;
}

double FwiEvaluator::loss(const VelocityMap& map) {
  if (!cached_map_ || !(*cached_map_ == map)) forward(map);
  return cached_loss_;
}

GradientResult FwiEvaluator::gradient(const VelocityMap& map) {
  if (!cached_map_ || !(*cached_map_ == map)) forward(map);
  const wave::PaddedModel model = wave::pad_with_sponge(map, geom_.nbc, geom_.sponge_decay);
  const std::size_t ns = geom_.sources.size();
  const std::size_t nr = geom_.receivers.size();
  const std::size_t nt = geom_.nt_stored;
  const std::size_t nz = map.nz();
  const std::size_t nx = map.nx();
  const std::size_t cells = nz * nx;
  const ZeroPhaseLowpass* filter = filter_ ? &*filter_ : nullptr;

  std::vector<std::vector<double>> acc(ns), illum(ns);
  parallel_for(ns, [&](std::size_t s) {
    const ShotState& st = *shots_[s];
    std::vector<double> g(nt * nr);
    filter_columns(filter, true, nt, nr, st.residual, g);

    Propagator prop(model, geom_.dt, options_.kernel);
    std::vector<Propagator::Injection> inj(nr);
    for (std::size_t r = 0; r < nr; ++r) inj[r].cell = prop.interior_index(geom_.receivers[r]);
    std::vector<double> b(cells);
    acc[s].assign(cells, 0.0);
    illum[s].assign(cells, 0.0);
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t m = nt - j;  // adjoint field after this step is b^m
      for (std::size_t r = 0; r < nr; ++r) inj[r].amplitude = g[(m - 1) * nr + r];
      prop.step(inj);
      if ((j + 1) % 50 == 0 || j + 1 == nt) prop.check_finite();
      prop.copy_interior(prop.current(), b);
      const double* un = st.history.data() + (m + 1) * cells;
      const double* uc = un - cells;
      const double* up = uc - cells;
      if (options_.kernel == wave::kernels::Kernel::Reference) {
        wave::kernels::correlate_reference(cells, b.data(), un, uc, up, acc[s].data());
      } else {
        wave::kernels::correlate_openmp(cells, b.data(), un, uc, up, acc[s].data());
      }
      double* il = illum[s].data();
      for (std::size_t c = 0; c < cells; ++c) {
        const double d2 = un[c] - 2.0 * uc[c] + up[c];
        il[c] += d2 * d2;
      }
    }
  });
  ++adjoint_runs_;

  GradientResult out;
  out.loss = cached_loss_;
  out.gradient = Array2D(nz, nx, 0.0);
  out.illumination = Array2D(nz, nx, 0.0);
  const double dt2 = geom_.dt * geom_.dt;
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t z = 0; z < nz; ++z) {
      for (std::size_t x = 0; x < nx; ++x) {
        out.gradient(z, x) += acc[s][z * nx + x];
        out.illumination(z, x) += illum[s][z * nx + x];
      }
    }
  }
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t x = 0; x < nx; ++x) {
      const double c = map(z, x);
      out.gradient(z, x) =
          z < options_.mask_top_rows ? 0.0 : out.gradient(z, x) * 2.0 / (c * c * c * dt2);
    }
  }
  return out;
}

GradientResult gradient_adjoint(const VelocityMap& map, const AcquisitionGeometry& geom,
                                const RickerWavelet& wavelet, const SeismicGather& obs_filtered,
                                const ZeroPhaseLowpass* filter, const GradientOptions& options) {
  std::optional<ZeroPhaseLowpass> f;
  if (filter != nullptr) f = *filter;
  FwiEvaluator eval(geom, wavelet, obs_filtered, f, options);
  return eval.gradient(map);
}

double loss_only(const VelocityMap& map, const AcquisitionGeometry& geom,
                 const RickerWavelet& wavelet, const SeismicGather& obs_filtered,
                 const ZeroPhaseLowpass* filter, const GradientOptions& options) {
  check_obs(geom, obs_filtered);
  wave::ForwardOptions fo;
  fo.kernel = options.kernel;
  AcquisitionGeometry g = geom;
  g.nt_sim = geom.nt_stored;
  const SeismicGather pred = wave::forward_model(map, g, wavelet, fo);
  const std::size_t nt = geom.nt_stored;
  const std::size_t nr = geom.receivers.size();
  double total = 0.0;
  std::vector<double> filt(nt * nr);
  for (std::size_t s = 0; s < pred.ns(); ++s) {
    filter_columns(filter, false, nt, nr, pred.shot(s), filt);
    const auto obs = obs_filtered.shot(s);
    double l = 0.0;
    for (std::size_t i = 0; i < filt.size(); ++i) {
      const double d = filt[i] - obs[i];
      l += d * d;
    }
    total += 0.5 * l;
  }
  return total;
}

}  // namespace fwiforge::fwi
