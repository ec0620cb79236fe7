// Serial reference against OpenMP kernels on the paper-replica padded grid
// (70 x 70 interior, 120-cell sponge), plus whole-shot and gradient runs.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fwiforge/fwi/gradient.hpp"
#include "fwiforge/synth/velocity_synth.hpp"
#include "fwiforge/wave/kernels.hpp"
#include "fwiforge/wave/model.hpp"
#include "fwiforge/wave/propagator.hpp"
#include "fwiforge/wave/ricker.hpp"

using namespace fwiforge;
using namespace fwiforge::wave;

namespace {

struct Fields {
  kernels::StencilGrid grid;
  std::vector<double> kappa, damp, prev, cur, next;

  explicit Fields(std::size_t n) {
    grid.rows = grid.cols = n;
    const std::size_t size = grid.storage_size();
    kappa.assign(size, 0.0);
    damp.assign(size, 1.0);
    prev.assign(size, 0.0);
    cur.assign(size, 0.0);
    next.assign(size, 0.0);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t c = grid.index(i, j);
        kappa[c] = 0.1;
        prev[c] = u(rng);
        cur[c] = u(rng);
      }
    grid.kappa = kappa.data();
    grid.damp = damp.data();
  }
};

VelocityMap sample_map() {
  auto cfg = synth::GeneratorConfig::defaults(synth::Family::FlatVel, synth::Version::A);
  cfg.seed = 3;
  return synth::synthesize_sample(cfg, 0).map;
}

template <kernels::Kernel K>
void BM_Step(benchmark::State& state) {
  Fields f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    if constexpr (K == kernels::Kernel::Reference) {
      kernels::step_reference(f.grid, f.prev.data(), f.cur.data(), f.next.data());
    } else {
      kernels::step_openmp(f.grid, f.prev.data(), f.cur.data(), f.next.data());
    }
    benchmark::DoNotOptimize(f.next.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <kernels::Kernel K>
void BM_Correlate(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a(n, 0.5), b(n, 1.0), c(n, 2.0), d(n, 3.0), acc(n, 0.0);
  for (auto _ : state) {
    if constexpr (K == kernels::Kernel::Reference) {
      kernels::correlate_reference(n, a.data(), b.data(), c.data(), d.data(), acc.data());
    } else {
      kernels::correlate_openmp(n, a.data(), b.data(), c.data(), d.data(), acc.data());
    }
    benchmark::DoNotOptimize(acc.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <kernels::Kernel K>
void BM_Shot(benchmark::State& state) {
  const AcquisitionGeometry g = AcquisitionGeometry::paper_replica();
  const PaddedModel p = pad_with_sponge(sample_map(), g.nbc, g.sponge_decay);
  const RickerWavelet w = ricker(g.source_freq, g.dt, g.nt_sim);
  ForwardOptions opts;
  opts.kernel = K;
  for (auto _ : state) benchmark::DoNotOptimize(propagate_shot(p, g, w, 2, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.nt_sim * p.rows() * p.cols()));
}

void BM_ForwardGather(benchmark::State& state) {
  const AcquisitionGeometry g = AcquisitionGeometry::paper_replica();
  const VelocityMap m = sample_map();
  const RickerWavelet w = ricker(g.source_freq, g.dt, g.nt_sim);
  for (auto _ : state) benchmark::DoNotOptimize(forward_model(m, g, w));
}

void BM_Gradient(benchmark::State& state) {
  const AcquisitionGeometry g = AcquisitionGeometry::paper_replica();
  const VelocityMap truth = sample_map();
  const RickerWavelet w = ricker(g.source_freq, g.dt, g.nt_sim);
  const SeismicGather obs = forward_model(truth, g, w);
  const VelocityMap start(truth.nz(), truth.nx(), truth.dx(), truth.min());
  for (auto _ : state) benchmark::DoNotOptimize(fwi::gradient_adjoint(start, g, w, obs));
}

}  // namespace

BENCHMARK(BM_Step<kernels::Kernel::Reference>)->Arg(310)->Arg(620);
BENCHMARK(BM_Step<kernels::Kernel::OpenMP>)->Arg(310)->Arg(620);
BENCHMARK(BM_Correlate<kernels::Kernel::Reference>)->Arg(4900)->Arg(96100);
BENCHMARK(BM_Correlate<kernels::Kernel::OpenMP>)->Arg(4900)->Arg(96100);
BENCHMARK(BM_Shot<kernels::Kernel::Reference>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Shot<kernels::Kernel::OpenMP>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForwardGather)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gradient)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
