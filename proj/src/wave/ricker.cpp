#include "fwiforge/wave/ricker.hpp"

#include <cmath>
#include <numbers>

#include "fwiforge/core/errors.hpp"

namespace fwiforge::wave {

double ricker_value(double freq, double tau) {
  const double arg = std::numbers::pi * std::numbers::pi * freq * freq * tau * tau;
  return (1.0 - 2.0 * arg) * std::exp(-arg);
}

RickerWavelet ricker(double freq, double dt, std::size_t nt, std::optional<double> delay) {
  if (!(freq > 0.0)) throw ConfigError("ricker: frequency must be positive");
  if (!(dt > 0.0)) throw ConfigError("ricker: dt must be positive");
  if (nt < 2) throw ConfigError("ricker: need at least 2 samples");
  RickerWavelet w;
  w.freq = freq;
  w.dt = dt;
  w.delay = delay.value_or(1.0 / freq);
  w.samples.resize(nt);
  for (std::size_t n = 0; n < nt; ++n) {
    w.samples[n] = ricker_value(freq, static_cast<double>(n) * dt - w.delay);
  }
  return w;
}

}  // namespace fwiforge::wave
