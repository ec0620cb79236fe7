#pragma once

#include "json.hpp"

#include "fwiforge/core/types.hpp"
#include "fwiforge/fwi/multiscale.hpp"
#include "fwiforge/synth/velocity_synth.hpp"

namespace fwiforge::cli {

nlohmann::json to_json(const synth::GeneratorConfig& c);
nlohmann::json to_json(const AcquisitionGeometry& g);
nlohmann::json to_json(const fwi::InversionConfig& c);

}  // namespace fwiforge::cli
