#include "fwiforge/core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fwiforge/core/errors.hpp"

namespace fwiforge {

namespace {

void require_range(double lo, double hi) {
  if (!(hi > lo)) {
    throw InvalidRangeError("normalization range requires hi > lo, got [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + "]");
  }
}

std::vector<double> gaussian_window(std::size_t n, double sigma) {
  std::vector<double> w(n);
  const double centre = (static_cast<double>(n) - 1.0) / 2.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(i) - centre;
    w[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    total += w[i];
  }
  for (double& v : w) v /= total;
  return w;
}

// Separable weighted sums over every fully-contained window; result is
// (rows - n + 1) x (cols - n + 1).
Array2D filter_valid(const Array2D& in, const std::vector<double>& w) {
  const std::size_t n = w.size();
  const std::size_t out_rows = in.rows() - n + 1;
  const std::size_t out_cols = in.cols() - n + 1;
  Array2D horiz(in.rows(), out_cols);
  for (std::size_t r = 0; r < in.rows(); ++r) {
    for (std::size_t c = 0; c < out_cols; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += w[k] * in(r, c + k);
      horiz(r, c) = s;
    }
  }
  Array2D out(out_rows, out_cols);
  for (std::size_t r = 0; r < out_rows; ++r) {
    for (std::size_t c = 0; c < out_cols; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += w[k] * horiz(r + k, c);
      out(r, c) = s;
    }
  }
  return out;
}

Array2D product(const Array2D& a, const Array2D& b) {
  Array2D out(a.rows(), a.cols());
  auto o = out.data();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] * y[i];
  return out;
}

}  // namespace

Array2D minmax_normalize(const Array2D& field, double lo, double hi) {
  require_range(lo, hi);
  Array2D out(field.rows(), field.cols());
  const double scale = 2.0 / (hi - lo);
  auto in = field.data();
  auto o = out.data();
  for (std::size_t i = 0; i < in.size(); ++i) o[i] = (in[i] - lo) * scale - 1.0;
  return out;
}

Array2D minmax_denormalize(const Array2D& normalized, double lo, double hi) {
  require_range(lo, hi);
  Array2D out(normalized.rows(), normalized.cols());
  const double half_span = (hi - lo) / 2.0;
  auto in = normalized.data();
  auto o = out.data();
  for (std::size_t i = 0; i < in.size(); ++i) o[i] = (in[i] + 1.0) * half_span + lo;
  return out;
}

double mae(const Array2D& a, const Array2D& b) {
  require_same_shape(a, b, "mae");
  if (a.empty()) throw DimensionError("mae: empty arrays");
  double s = 0.0;
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
  return s / static_cast<double>(x.size());
}

double rmse(const Array2D& a, const Array2D& b) {
  require_same_shape(a, b, "rmse");
  if (a.empty()) throw DimensionError("rmse: empty arrays");
  double s = 0.0;
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(x.size()));
}

SsimResult ssim(const Array2D& a, const Array2D& b, const SsimOptions& options) {
  require_same_shape(a, b, "ssim");
  if (a.empty()) throw DimensionError("ssim: empty arrays");

  SsimResult result;
  result.window = std::min({options.window, a.rows(), a.cols()});
  result.window_shrunk = result.window < options.window;
  const auto w = gaussian_window(result.window, options.sigma);

  const double c1 = (options.k1 * options.data_range) * (options.k1 * options.data_range);
  const double c2 = (options.k2 * options.data_range) * (options.k2 * options.data_range);

  const Array2D mu_a = filter_valid(a, w);
  const Array2D mu_b = filter_valid(b, w);
  const Array2D e_aa = filter_valid(product(a, a), w);
  const Array2D e_bb = filter_valid(product(b, b), w);
  const Array2D e_ab = filter_valid(product(a, b), w);

  double total = 0.0;
  const std::size_t n = mu_a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double ma = mu_a.data()[i];
    const double mb = mu_b.data()[i];
    const double var_a = e_aa.data()[i] - ma * ma;
    const double var_b = e_bb.data()[i] - mb * mb;
    const double cov = e_ab.data()[i] - ma * mb;
    const double num = (2.0 * ma * mb + c1) * (2.0 * cov + c2);
    const double den = (ma * ma + mb * mb + c1) * (var_a + var_b + c2);
    total += num / den;
  }
  result.value = total / static_cast<double>(n);
  return result;
}

MetricReport compare_velocity(const VelocityMap& truth, const VelocityMap& estimate, double lo,
                              double hi) {
  const Array2D t = minmax_normalize(truth.values(), lo, hi);
  const Array2D e = minmax_normalize(estimate.values(), lo, hi);
  return {mae(t, e), rmse(t, e), ssim(t, e).value};
}

}  // namespace fwiforge
