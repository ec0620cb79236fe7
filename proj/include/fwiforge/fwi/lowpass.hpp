#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fwiforge/core/types.hpp"

namespace fwiforge::fwi {

/// Direct-form-II-transposed second-order section, a0 normalized to 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

/// Butterworth low-pass (bilinear transform, prewarped) run forward then
/// backward over each trace. The ends are extended by odd reflection and the
/// filter states start at their step-response steady state, so constant
/// traces pass unchanged. The whole operation is linear and apply_transpose
/// is its exact adjoint, which the FWI gradient relies on.
class ZeroPhaseLowpass {
 public:
  /// Throws ConfigError unless 0 < cutoff < 1 / (2 dt) and order is even.
  ZeroPhaseLowpass(double cutoff_hz, double dt, int order = 4);

  double cutoff() const noexcept { return cutoff_; }
  double dt() const noexcept { return dt_; }
  const std::vector<Biquad>& sections() const noexcept { return sections_; }

  void apply(std::span<const double> in, std::span<double> out) const;
  void apply_transpose(std::span<const double> in, std::span<double> out) const;

  /// Single-pass frequency response H(exp(i 2 pi f dt)).
  std::complex<double> response(double freq_hz) const;
  /// Gain of the forward-backward pair, |H|^2.
  double zero_phase_gain(double freq_hz) const { return std::norm(response(freq_hz)); }

 private:
  std::size_t pad_length(std::size_t n) const;
  void cascade(std::vector<double>& x) const;
  void cascade_transpose(std::vector<double>& x) const;

  double cutoff_;
  double dt_;
  std::vector<Biquad> sections_;
  std::vector<std::array<double, 2>> steady_state_;  ///< unit-step DF2T states
};

/// Filters every trace of the gather along time.
SeismicGather lowpass(const SeismicGather& gather, double cutoff_hz);
SeismicGather lowpass(const SeismicGather& gather, const ZeroPhaseLowpass& filter);
SeismicGather lowpass_transpose(const SeismicGather& gather, const ZeroPhaseLowpass& filter);

}  // namespace fwiforge::fwi
