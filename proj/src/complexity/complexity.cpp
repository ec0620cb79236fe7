#include "fwiforge/complexity/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "fwiforge/core/errors.hpp"
#include "fwiforge/core/metrics.hpp"
#include "fwiforge/core/parallel.hpp"

namespace fwiforge::complexity {

SobelGradients sobel_gradients(const Array2D& a) {
  const std::size_t nr = a.rows(), nc = a.cols();
  if (nr == 0 || nc == 0) throw DimensionError("sobel_gradients: empty array");
  auto at = [&](long r, long c) {
    r = std::clamp<long>(r, 0, static_cast<long>(nr) - 1);
    c = std::clamp<long>(c, 0, static_cast<long>(nc) - 1);
    return a(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  };
  SobelGradients g{Array2D(nr, nc), Array2D(nr, nc)};
  for (long r = 0; r < static_cast<long>(nr); ++r) {
    for (long c = 0; c < static_cast<long>(nc); ++c) {
      const double gx = (at(r - 1, c + 1) + 2.0 * at(r, c + 1) + at(r + 1, c + 1)) -
                        (at(r - 1, c - 1) + 2.0 * at(r, c - 1) + at(r + 1, c - 1));
      const double gy = (at(r + 1, c - 1) + 2.0 * at(r + 1, c) + at(r + 1, c + 1)) -
                        (at(r - 1, c - 1) + 2.0 * at(r - 1, c) + at(r - 1, c + 1));
      g.gx(r, c) = gx;
      g.gy(r, c) = gy;
    }
  }
  return g;
}

namespace {

std::vector<double> magnitudes(const Array2D& a) {
  const SobelGradients g = sobel_gradients(a);
  std::vector<double> m(a.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::hypot(g.gx.data()[i], g.gy.data()[i]);
  return m;
}

}  // namespace

double spatial_information(const Array2D& normalized, double scale) {
  const std::vector<double> m = magnitudes(normalized);
  double s = 0.0;
  for (double v : m) s += v;
  return scale * s / static_cast<double>(m.size());
}

double gradient_sparsity_index(const Array2D& normalized, double eps) {
  if (!(eps >= 0.0)) throw InvalidRangeError("gradient_sparsity_index: eps must be >= 0");
  const std::vector<double> m = magnitudes(normalized);
  const auto count = std::count_if(m.begin(), m.end(), [&](double v) { return v > eps; });
  return static_cast<double>(count) / static_cast<double>(m.size());
}

double shannon_entropy(const Array2D& velocity, double bin_width, double lo, double hi) {
  if (!(bin_width > 0.0)) throw InvalidRangeError("shannon_entropy: bin_width must be > 0");
  if (!(hi > lo)) throw InvalidRangeError("shannon_entropy: empty histogram range");
  if (velocity.empty()) throw DimensionError("shannon_entropy: empty array");
  const auto nbins = static_cast<std::size_t>(std::ceil((hi - lo) / bin_width - 1e-9));
  std::vector<std::size_t> counts(std::max<std::size_t>(nbins, 1), 0);
  for (double v : velocity.data()) {
    const double t = std::floor((v - lo) / bin_width);
    const long b = std::clamp<long>(static_cast<long>(std::clamp(t, -1.0, 1e9)), 0,
                                    static_cast<long>(counts.size()) - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  const double n = static_cast<double>(velocity.size());
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h == 0.0 ? 0.0 : h;
}

ComplexityReport map_complexity(const VelocityMap& map, const ComplexityOptions& o) {
  const Array2D norm = minmax_normalize(map.values(), o.vmin, o.vmax);
  ComplexityReport r;
  const std::vector<double> m = magnitudes(norm);
  double s = 0.0;
  std::size_t above = 0;
  for (double v : m) {
    s += v;
    if (v > o.gsi_eps) ++above;
  }
  r.si_mean = o.si_scale * s / static_cast<double>(m.size());
  r.gsi = static_cast<double>(above) / static_cast<double>(m.size());
  r.entropy = shannon_entropy(map.values(), o.bin_width, o.vmin, o.vmax);
  return r;
}

ComplexityReport complexity_report(std::span<const VelocityMap> maps,
                                   const ComplexityOptions& options) {
  if (maps.empty()) throw DimensionError("complexity_report: empty batch");
  std::vector<ComplexityReport> each(maps.size());
  parallel_for(maps.size(), [&](std::size_t i) { each[i] = map_complexity(maps[i], options); });
  ComplexityReport mean;
  for (const auto& r : each) {
    mean.si_mean += r.si_mean;
    mean.gsi += r.gsi;
    mean.entropy += r.entropy;
  }
  const double n = static_cast<double>(maps.size());
  mean.si_mean /= n;
  mean.gsi /= n;
  mean.entropy /= n;
  return mean;
}

double calibrate_bin_width(std::span<const VelocityMap> maps, double target,
                           std::span<const double> candidates, const ComplexityOptions& options) {
  if (candidates.empty()) throw ConfigError("calibrate_bin_width: no candidate widths");
  double best = candidates.front();
  double best_err = std::numeric_limits<double>::infinity();
  for (double w : candidates) {
    ComplexityOptions o = options;
    o.bin_width = w;
    const double err = std::abs(complexity_report(maps, o).entropy - target);
    if (err < best_err) {
      best_err = err;
      best = w;
    }
  }
  return best;
}

void write_key_value(std::ostream& os, const ComplexityReport& r) {
  const auto prec = os.precision(8);
  os << "si_mean " << r.si_mean << "\ngsi " << r.gsi << "\nentropy " << r.entropy << '\n';
  os.precision(prec);
}

void write_csv_header(std::ostream& os) { os << "map_id,si,gsi,entropy\n"; }

void write_csv_row(std::ostream& os, const std::string& id, const ComplexityReport& r) {
  const auto prec = os.precision(8);
  os << id << ',' << r.si_mean << ',' << r.gsi << ',' << r.entropy << '\n';
  os.precision(prec);
}

}  // namespace fwiforge::complexity
