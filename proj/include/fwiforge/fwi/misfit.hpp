#pragma once

#include "fwiforge/core/types.hpp"

namespace fwiforge::fwi {

/// 0.5 * sum (pred - obs)^2 over shots, samples and receivers.
double misfit_l2(const SeismicGather& pred, const SeismicGather& obs);

}  // namespace fwiforge::fwi
