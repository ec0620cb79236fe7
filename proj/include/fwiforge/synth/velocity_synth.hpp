#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fwiforge/core/types.hpp"
#include "fwiforge/synth/rng.hpp"

namespace fwiforge::synth {

enum class Family { FlatVel, CurveVel, FlatFault, CurveFault };
enum class Version { A, B };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct IntInterval {
  int lo = 0;
  int hi = 0;
};

/// Parameters of the layered/fold/fault prior. Every random quantity is drawn
/// uniformly from its interval; point intervals pin it.
struct GeneratorConfig {
  Family family = Family::FlatVel;
  Version version = Version::A;
  std::size_t nz = 70;
  std::size_t nx = 70;
  double dx = 10.0;

  IntInterval n_layers{2, 5};
  IntInterval n_folds{0, 0};
  IntInterval n_faults{0, 0};

  Interval amplitude{50.0, 150.0};  ///< fold amplitude a, metres (sign drawn separately)
  Interval wavenumber{0.5, 2.0};    ///< k, cycles per map width
  Interval shift{-10.0, 10.0};      ///< fault shifts s, s', cells
  Interval fault_dip_deg{30.0, 80.0};

  double vmin = kPaperVelocityMin;
  double vmax = kPaperVelocityMax;
  Interval first_layer_velocity{1500.0, 2500.0};  ///< version A only
  Interval layer_increment{200.0, 700.0};         ///< version A only

  std::uint64_t seed = 0;

  /// Family defaults: flat families never fold, vel families never fault.
  static GeneratorConfig defaults(Family family, Version version);

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

bool is_fault_family(Family f);
bool is_curve_family(Family f);

/// "flatvel-a", "curvefault-b", ...
std::string family_name(Family f, Version v);
/// Inverse of family_name; throws ConfigError on unknown names.
std::pair<Family, Version> parse_family(std::string_view name);

/// Fault plane y = slope * x + intercept (x = column, y = row, both in cells).
struct FaultLine {
  double slope = 0.0;
  double intercept = 0.0;
  int shift_x = 0;  ///< s
  int shift_y = 0;  ///< s'

  bool displaced(std::size_t x, std::size_t y) const {
    return static_cast<double>(y) >= slope * static_cast<double>(x) + intercept;
  }
};

struct FlatLayers {
  VelocityMap map;
  std::vector<std::size_t> tops;  ///< first row of each layer
  std::vector<double> velocities;
};

/// c_0: horizontally constant bands, every band at least two rows thick.
FlatLayers draw_flat_layers(const GeneratorConfig& config, Rng& rng);
VelocityMap gen_flat_layers(const GeneratorConfig& config);

/// output(x, y) = input(x, clamp(y + round(a sin(2 pi k x / nx) / dx))).
VelocityMap apply_fold(const VelocityMap& map, double amplitude, double wavenumber);

/// Cells on or below the fault line take base(clamp(x + s), clamp(y + fold(x) + s'));
/// the others keep map.
VelocityMap apply_fault(const VelocityMap& map, const VelocityMap& base, const FaultLine& fault,
                        double amplitude, double wavenumber);

struct SynthSample {
  VelocityMap map;
  int n_layers = 0;
};

/// One sample reproducible from (config.seed, index) alone.
SynthSample synthesize_sample(const GeneratorConfig& config, std::uint64_t index);

/// count samples, generated in parallel; identical to calling synthesize_sample
/// for each index in turn.
std::vector<SynthSample> synthesize_batch(const GeneratorConfig& config, std::size_t count);

}  // namespace fwiforge::synth
