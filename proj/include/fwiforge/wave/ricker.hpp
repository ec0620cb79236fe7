#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace fwiforge::wave {

struct RickerWavelet {
  double freq = 0.0;
  double dt = 0.0;
  double delay = 0.0;
  std::vector<double> samples;

  std::size_t nt() const noexcept { return samples.size(); }
};

/// Ricker value (1 - 2 pi^2 f^2 tau^2) exp(-pi^2 f^2 tau^2).
double ricker_value(double freq, double tau);

/// samples[n] = ricker_value(freq, n * dt - delay); delay defaults to 1 / freq.
RickerWavelet ricker(double freq, double dt, std::size_t nt,
                     std::optional<double> delay = std::nullopt);

}  // namespace fwiforge::wave
