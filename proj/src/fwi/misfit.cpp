#include "fwiforge/fwi/misfit.hpp"

#include <string>

#include "fwiforge/core/errors.hpp"

namespace fwiforge::fwi {

double misfit_l2(const SeismicGather& pred, const SeismicGather& obs) {
  if (!pred.same_shape(obs)) {
    throw DimensionError("misfit_l2: gather shapes differ (" + std::to_string(pred.ns()) + "x" +
                         std::to_string(pred.nt()) + "x" + std::to_string(pred.nr()) + " vs " +
                         std::to_string(obs.ns()) + "x" + std::to_string(obs.nt()) + "x" +
                         std::to_string(obs.nr()) + ")");
  }
  double s = 0.0;
  const auto p = pred.data();
  const auto o = obs.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - o[i];
    s += d * d;
  }
  return 0.5 * s;
}

}  // namespace fwiforge::fwi
