#include "fwiforge/cli/config.hpp"

namespace fwiforge::cli {

using nlohmann::json;

namespace {

json interval(const synth::Interval& i) { return json::array({i.lo, i.hi}); }
json interval(const synth::IntInterval& i) { return json::array({i.lo, i.hi}); }

json points(const std::vector<GridPoint>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(json::array({p.x, p.z}));
  return a;
}

}  // namespace

json to_json(const synth::GeneratorConfig& c) {
  return {{"family", synth::family_name(c.family, c.version)},
          {"nz", c.nz},
          {"nx", c.nx},
          {"dx", c.dx},
          {"n_layers", interval(c.n_layers)},
          {"n_folds", interval(c.n_folds)},
          {"n_faults", interval(c.n_faults)},
          {"amplitude", interval(c.amplitude)},
          {"wavenumber", interval(c.wavenumber)},
          {"shift", interval(c.shift)},
          {"fault_dip_deg", interval(c.fault_dip_deg)},
          {"vmin", c.vmin},
          {"vmax", c.vmax},
          {"first_layer_velocity", interval(c.first_layer_velocity)},
          {"layer_increment", interval(c.layer_increment)},
          {"seed", c.seed}};
}

json to_json(const AcquisitionGeometry& g) {
  return {{"dx", g.dx},
          {"dt", g.dt},
          {"nt_sim", g.nt_sim},
          {"nt_stored", g.nt_stored},
          {"nbc", g.nbc},
          {"sources", points(g.sources)},
          {"receivers", points(g.receivers)},
          {"source_freq", g.source_freq},
          {"source_gain", g.source_gain},
          {"sponge_decay", g.sponge_decay}};
}

json to_json(const fwi::InversionConfig& c) {
  return {{"cutoffs", c.cutoffs},
          {"max_iters_per_stage", c.max_iters_per_stage},
          {"stop_rel_loss_change", c.stop_rel_loss_change},
          {"line_search",
           {{"max_step_halvings", c.line_search.max_step_halvings},
            {"initial_step", c.line_search.initial_step},
            {"armijo", c.line_search.armijo},
            {"refine_step", c.line_search.refine_step}}},
          {"bounds", json::array({c.vmin, c.vmax})},
          {"precondition", c.precondition},
          {"precondition_eps", c.precondition_eps},
          {"mask_top_rows", c.gradient.mask_top_rows}};
}

}  // namespace fwiforge::cli
