#include "fwiforge/synth/velocity_synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "fwiforge/core/errors.hpp"
#include "fwiforge/core/parallel.hpp"

namespace fwiforge::synth {

namespace {

std::size_t clamp_index(long i, std::size_t n) {
  if (i < 0) return 0;
  if (static_cast<std::size_t>(i) >= n) return n - 1;
  return static_cast<std::size_t>(i);
}

long fold_shift(std::size_t x, std::size_t nx, double dx, double amplitude, double wavenumber) {
  const double phase =
      2.0 * std::numbers::pi * wavenumber * static_cast<double>(x) / static_cast<double>(nx);
  return static_cast<long>(std::round(amplitude * std::sin(phase) / dx));
}

void check_interval(const Interval& iv, const char* name) {
  if (!(iv.lo <= iv.hi)) throw ConfigError(std::string("generator: empty interval for ") + name);
}

void check_interval(const IntInterval& iv, const char* name) {
  if (iv.lo > iv.hi) throw ConfigError(std::string("generator: empty interval for ") + name);
}

double draw_amplitude(const GeneratorConfig& c, Rng& rng) {
  const double a = rng.uniform(c.amplitude.lo, c.amplitude.hi);
  return rng.coin() ? a : -a;
}

}  // namespace

bool is_fault_family(Family f) { return f == Family::FlatFault || f == Family::CurveFault; }
bool is_curve_family(Family f) { return f == Family::CurveVel || f == Family::CurveFault; }

std::string family_name(Family f, Version v) {
  std::string base;
  switch (f) {
    case Family::FlatVel: base = "flatvel"; break;
    case Family::CurveVel: base = "curvevel"; break;
    case Family::FlatFault: base = "flatfault"; break;
    case Family::CurveFault: base = "curvefault"; break;
  }
  return base + (v == Version::A ? "-a" : "-b");
}

std::pair<Family, Version> parse_family(std::string_view name) {
  for (Family f : {Family::FlatVel, Family::CurveVel, Family::FlatFault, Family::CurveFault}) {
    for (Version v : {Version::A, Version::B}) {
      if (family_name(f, v) == name) return {f, v};
    }
  }
  throw ConfigError("unknown family '" + std::string(name) + "'");
}

GeneratorConfig GeneratorConfig::defaults(Family family, Version version) {
  GeneratorConfig c;
  c.family = family;
  c.version = version;
  c.n_folds = is_curve_family(family) ? IntInterval{1, 2} : IntInterval{0, 0};
  c.n_faults = is_fault_family(family) ? IntInterval{1, 3} : IntInterval{0, 0};
  return c;
}

void GeneratorConfig::validate() const {
  if (nz == 0 || nx == 0) throw ConfigError("generator: empty grid");
  if (!(dx > 0.0)) throw ConfigError("generator: dx must be positive");
  if (!(vmin > 0.0) || !(vmin < vmax)) throw ConfigError("generator: requires 0 < vmin < vmax");
  check_interval(n_layers, "n_layers");
  check_interval(n_folds, "n_folds");
  check_interval(n_faults, "n_faults");
  check_interval(amplitude, "amplitude");
  check_interval(wavenumber, "wavenumber");
  check_interval(shift, "shift");
  check_interval(fault_dip_deg, "fault_dip_deg");
  check_interval(first_layer_velocity, "first_layer_velocity");
  check_interval(layer_increment, "layer_increment");
  if (n_layers.lo < 2) throw ConfigError("generator: n_layers must be >= 2");
  if (static_cast<std::size_t>(n_layers.hi) * 2 > nz) {
    throw ConfigError("generator: n_layers up to " + std::to_string(n_layers.hi) +
                      " exceeds nz/2 = " + std::to_string(nz / 2));
  }
  if (n_folds.lo < 0 || n_faults.lo < 0) throw ConfigError("generator: negative fold/fault count");
  if (!is_curve_family(family) && n_folds.hi != 0) {
    throw ConfigError("generator: flat families take no folds");
  }
  if (!is_fault_family(family) && n_faults.hi != 0) {
    throw ConfigError("generator: vel families take no faults");
  }
  const bool folds_used = n_folds.hi > 0 || (is_curve_family(family) && n_faults.hi > 0);
  if (folds_used && (std::abs(amplitude.hi) / dx > static_cast<double>(nz) ||
                     std::abs(amplitude.lo) / dx > static_cast<double>(nz))) {
    throw ConfigError("generator: fold amplitude exceeds the grid height");
  }
}

FlatLayers draw_flat_layers(const GeneratorConfig& config, Rng& rng) {
  config.validate();
  const int n = rng.uniform_int(config.n_layers.lo, config.n_layers.hi);
  const int extra = static_cast<int>(config.nz) - 2 * n;

  std::vector<int> offsets(static_cast<std::size_t>(n - 1));
  for (int& o : offsets) o = rng.uniform_int(0, extra);
  std::sort(offsets.begin(), offsets.end());

  std::vector<std::size_t> tops{0};
  for (int i = 0; i < n - 1; ++i) {
    tops.push_back(static_cast<std::size_t>(offsets[static_cast<std::size_t>(i)] + 2 * (i + 1)));
  }

  std::vector<double> velocities;
  if (config.version == Version::A) {
    double v = std::clamp(
        rng.uniform(config.first_layer_velocity.lo, config.first_layer_velocity.hi), config.vmin,
        config.vmax);
    velocities.push_back(v);
    for (int i = 1; i < n; ++i) {
      v = std::min(v + rng.uniform(config.layer_increment.lo, config.layer_increment.hi),
                   config.vmax);
      velocities.push_back(v);
    }
  } else {
    for (int i = 0; i < n; ++i) velocities.push_back(rng.uniform(config.vmin, config.vmax));
  }

  Array2D values(config.nz, config.nx);
  std::size_t layer = 0;
  for (std::size_t z = 0; z < config.nz; ++z) {
    while (layer + 1 < tops.size() && z >= tops[layer + 1]) ++layer;
    for (double& v : values.row(z)) v = velocities[layer];
  }
  return {VelocityMap(std::move(values), config.dx), std::move(tops), std::move(velocities)};
}

VelocityMap gen_flat_layers(const GeneratorConfig& config) {
  Rng rng(config.seed);
  return draw_flat_layers(config, rng).map;
}

VelocityMap apply_fold(const VelocityMap& map, double amplitude, double wavenumber) {
  const std::size_t nz = map.nz();
  const std::size_t nx = map.nx();
  if (std::abs(amplitude) / map.dx() > static_cast<double>(nz)) {
    throw ConfigError("apply_fold: |a|/dx exceeds the grid height");
  }
  Array2D out(nz, nx);
  for (std::size_t x = 0; x < nx; ++x) {
    const long shift = fold_shift(x, nx, map.dx(), amplitude, wavenumber);
    for (std::size_t y = 0; y < nz; ++y) {
      out(y, x) = map(clamp_index(static_cast<long>(y) + shift, nz), x);
    }
  }
  return VelocityMap(std::move(out), map.dx());
}

VelocityMap apply_fault(const VelocityMap& map, const VelocityMap& base, const FaultLine& fault,
                        double amplitude, double wavenumber) {
  require_same_shape(map.values(), base.values(), "apply_fault");
  const std::size_t nz = map.nz();
  const std::size_t nx = map.nx();
  Array2D out = map.values();
  for (std::size_t x = 0; x < nx; ++x) {
    const long shift = fold_shift(x, nx, map.dx(), amplitude, wavenumber);
    const std::size_t src_x = clamp_index(static_cast<long>(x) + fault.shift_x, nx);
    for (std::size_t y = 0; y < nz; ++y) {
      if (!fault.displaced(x, y)) continue;
      const std::size_t src_y = clamp_index(static_cast<long>(y) + shift + fault.shift_y, nz);
      out(y, x) = base(src_y, src_x);
    }
  }
  return VelocityMap(std::move(out), map.dx());
}

SynthSample synthesize_sample(const GeneratorConfig& config, std::uint64_t index) {
  Rng rng = Rng::for_sample(config.seed, index);
  FlatLayers layers = draw_flat_layers(config, rng);
  const VelocityMap& base = layers.map;
  VelocityMap map = base;

  const int folds = rng.uniform_int(config.n_folds.lo, config.n_folds.hi);
  for (int i = 0; i < folds; ++i) {
    const double a = draw_amplitude(config, rng);
    const double k = rng.uniform(config.wavenumber.lo, config.wavenumber.hi);
    map = apply_fold(map, a, k);
  }

  const int faults = rng.uniform_int(config.n_faults.lo, config.n_faults.hi);
  const bool curved = is_curve_family(config.family);
  const double nx = static_cast<double>(config.nx);
  const double nz = static_cast<double>(config.nz);
  for (int i = 0; i < faults; ++i) {
    FaultLine line;
    const double dip = rng.uniform(config.fault_dip_deg.lo, config.fault_dip_deg.hi);
    line.slope = std::tan(dip * std::numbers::pi / 180.0) * (rng.coin() ? 1.0 : -1.0);
    const double x0 = rng.uniform(0.2 * nx, 0.8 * nx);
    const double y0 = rng.uniform(0.2 * nz, 0.8 * nz);
    line.intercept = y0 - line.slope * x0;
    line.shift_x = static_cast<int>(std::round(rng.uniform(config.shift.lo, config.shift.hi)));
    line.shift_y = static_cast<int>(std::round(rng.uniform(config.shift.lo, config.shift.hi)));
    double a = 0.0;
    double k = 0.0;
    if (curved) {
      a = draw_amplitude(config, rng);
      k = rng.uniform(config.wavenumber.lo, config.wavenumber.hi);
    }
    map = apply_fault(map, base, line, a, k);
  }
  return {std::move(map), static_cast<int>(layers.velocities.size())};
}

std::vector<SynthSample> synthesize_batch(const GeneratorConfig& config, std::size_t count) {
  if (count < 1) throw ConfigError("synthesize_batch: count must be >= 1");
  config.validate();
  std::vector<std::optional<SynthSample>> slots(count);
  parallel_for(count, [&](std::size_t i) { slots[i] = synthesize_sample(config, i); });
  std::vector<SynthSample> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace fwiforge::synth
