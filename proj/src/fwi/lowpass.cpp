#include "fwiforge/fwi/lowpass.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fwiforge/core/errors.hpp"

namespace fwiforge::fwi {

namespace {

void run_biquad(const Biquad& q, double s1, double s2, std::vector<double>& x) {
  for (double& v : x) {
    const double in = v;
    const double y = q.b0 * in + s1;
    s1 = q.b1 * in - q.a1 * y + s2;
    s2 = q.b2 * in - q.a2 * y;
    v = y;
  }
}

}  // namespace

ZeroPhaseLowpass::ZeroPhaseLowpass(double cutoff_hz, double dt, int order)
    : cutoff_(cutoff_hz), dt_(dt) {
  if (!(dt > 0.0)) throw ConfigError("lowpass: dt must be positive");
  const double nyquist = 0.5 / dt;
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < nyquist)) {
    throw ConfigError("lowpass: cutoff " + std::to_string(cutoff_hz) +
                      " Hz must lie in (0, Nyquist = " + std::to_string(nyquist) + " Hz)");
  }
  if (order < 2 || order % 2 != 0) throw ConfigError("lowpass: order must be even and >= 2");

  const double fs = 1.0 / dt;
  const double k = 2.0 * fs;
  const double wc = k * std::tan(std::numbers::pi * cutoff_hz / fs);
  const double k2 = k * k;
  const double w2 = wc * wc;
  for (int i = 0; i < order / 2; ++i) {
    // analog section wc^2 / (s^2 + 2 sin(theta) wc s + wc^2)
    const double theta = std::numbers::pi * (2.0 * i + 1.0) / (2.0 * order);
    const double b = 2.0 * std::sin(theta) * wc;
    const double a0 = k2 + b * k + w2;
    Biquad q;
    q.b0 = w2 / a0;
    q.b1 = 2.0 * w2 / a0;
    q.b2 = w2 / a0;
    q.a1 = (2.0 * w2 - 2.0 * k2) / a0;
    q.a2 = (k2 - b * k + w2) / a0;
    sections_.push_back(q);
    // unit DC gain per section: steady output 1 for unit input
    const double s2 = q.b2 - q.a2;
    const double s1 = q.b1 - q.a1 + s2;
    steady_state_.push_back({s1, s2});
  }
}

std::size_t ZeroPhaseLowpass::pad_length(std::size_t n) const {
  const std::size_t taps = 2 * sections_.size() + 1;
  return n == 0 ? 0 : std::min(3 * taps, n - 1);
}

// A(x) = H x + x[0] Z: zero-state cascade plus the free response of the
// steady states scaled by the first input sample.
void ZeroPhaseLowpass::cascade(std::vector<double>& x) const {
  if (x.empty()) return;
  const double x0 = x.front();
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    run_biquad(sections_[i], steady_state_[i][0] * x0, steady_state_[i][1] * x0, x);
  }
}

// A^T r = J H J r + e_0 (Z . r), using H^T = J H J for the causal Toeplitz H.
void ZeroPhaseLowpass::cascade_transpose(std::vector<double>& r) const {
  if (r.empty()) return;
  std::vector<double> free(r.size(), 0.0);
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    run_biquad(sections_[i], steady_state_[i][0], steady_state_[i][1], free);
  }
  double z_dot_r = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) z_dot_r += free[i] * r[i];

  std::reverse(r.begin(), r.end());
  for (const auto& q : sections_) run_biquad(q, 0.0, 0.0, r);
  std::reverse(r.begin(), r.end());
  r.front() += z_dot_r;
}

void ZeroPhaseLowpass::apply(std::span<const double> in, std::span<double> out) const {
  const std::size_t n = in.size();
  if (out.size() != n) throw DimensionError("lowpass: output length mismatch");
  if (n == 0) return;
  const std::size_t p = pad_length(n);

  std::vector<double> ext(n + 2 * p);
  for (std::size_t i = 0; i < p; ++i) ext[i] = 2.0 * in[0] - in[p - i];
  std::copy(in.begin(), in.end(), ext.begin() + static_cast<long>(p));
  for (std::size_t i = 0; i < p; ++i) ext[p + n + i] = 2.0 * in[n - 1] - in[n - 2 - i];

  cascade(ext);
  std::reverse(ext.begin(), ext.end());
  cascade(ext);
  std::reverse(ext.begin(), ext.end());
  std::copy(ext.begin() + static_cast<long>(p), ext.begin() + static_cast<long>(p + n), out.begin());
}

void ZeroPhaseLowpass::apply_transpose(std::span<const double> in, std::span<double> out) const {
  const std::size_t n = in.size();
  if (out.size() != n) throw DimensionError("lowpass: output length mismatch");
  if (n == 0) return;
  const std::size_t p = pad_length(n);

  std::vector<double> t(n + 2 * p, 0.0);
  std::copy(in.begin(), in.end(), t.begin() + static_cast<long>(p));
  std::reverse(t.begin(), t.end());
  cascade_transpose(t);
  std::reverse(t.begin(), t.end());
  cascade_transpose(t);

  std::copy(t.begin() + static_cast<long>(p), t.begin() + static_cast<long>(p + n), out.begin());
  for (std::size_t i = 0; i < p; ++i) {
    out[0] += 2.0 * t[i];
    out[p - i] -= t[i];
    out[n - 1] += 2.0 * t[p + n + i];
    out[n - 2 - i] -= t[p + n + i];
  }
}

std::complex<double> ZeroPhaseLowpass::response(double freq_hz) const {
  const std::complex<double> zinv = std::polar(1.0, -2.0 * std::numbers::pi * freq_hz * dt_);
  std::complex<double> h = 1.0;
  for (const auto& q : sections_) {
    h *= (q.b0 + zinv * (q.b1 + zinv * q.b2)) / (1.0 + zinv * (q.a1 + zinv * q.a2));
  }
  return h;
}

namespace {

template <class Op>
SeismicGather filter_traces(const SeismicGather& gather, Op op) {
  SeismicGather out(gather.ns(), gather.nt(), gather.nr(), gather.dt());
  std::vector<double> trace(gather.nt());
  std::vector<double> filtered(gather.nt());
  for (std::size_t s = 0; s < gather.ns(); ++s) {
    for (std::size_t r = 0; r < gather.nr(); ++r) {
      for (std::size_t t = 0; t < gather.nt(); ++t) trace[t] = gather.at(s, t, r);
      op(trace, filtered);
      for (std::size_t t = 0; t < gather.nt(); ++t) out.at(s, t, r) = filtered[t];
    }
  }
  return out;
}

}  // namespace

SeismicGather lowpass(const SeismicGather& gather, double cutoff_hz) {
  return lowpass(gather, ZeroPhaseLowpass(cutoff_hz, gather.dt()));
}

SeismicGather lowpass(const SeismicGather& gather, const ZeroPhaseLowpass& filter) {
  return filter_traces(gather, [&](const std::vector<double>& in, std::vector<double>& out) {
    filter.apply(in, out);
  });
}

SeismicGather lowpass_transpose(const SeismicGather& gather, const ZeroPhaseLowpass& filter) {
  return filter_traces(gather, [&](const std::vector<double>& in, std::vector<double>& out) {
    filter.apply_transpose(in, out);
  });
}

}  // namespace fwiforge::fwi
