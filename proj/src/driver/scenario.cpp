#include "hydroweld/driver/scenario.hpp"

#include <sstream>

namespace hydroweld {

std::string_view kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Weld: return "weld";
    case ScenarioKind::Permeation: return "permeation";
    case ScenarioKind::JRCurve: return "jr-curve";
    case ScenarioKind::Pipeline: return "pipeline";
  }
  return "?";
}

ScenarioKind kind_from_name(std::string_view s) {
  for (auto k : {ScenarioKind::Weld, ScenarioKind::Permeation, ScenarioKind::JRCurve, ScenarioKind::Pipeline})
    if (kind_name(k) == s) return k;
  throw std::invalid_argument("unknown scenario kind '" + std::string(s) +
                              "' (expected weld, permeation, jr-curve or pipeline)");
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void Scenario::validate() const {
  require(pipe.inner_radius > 0.0 && pipe.thickness > 0.0 && pipe.length > 0.0, "pipe dimensions must be positive");
  require(pipe.weld_angle > 0.0 && pipe.weld_angle < 180.0, "weld angle must lie in (0, 180) degrees");
  require(pipe.n_beads >= 1, "at least one weld bead is required");
  require(refinement.h_min > 0.0 && refinement.h_max >= refinement.h_min, "mesh sizes need 0 < h_min <= h_max");
  require(refinement.growth >= 1.0, "mesh growth ratio must be >= 1");
  require(refinement.order == 1 || refinement.order == 2, "element order must be 1 or 2");
  require(refinement.haz_width > 0.0 && refinement.root_gap >= 0.0, "HAZ band width must be positive");
  require(boundary_layer.outer_radius > boundary_layer.patch_ahead && boundary_layer.tip_size > 0.0,
          "boundary-layer domain must enclose the crack-tip patch");
  for (const auto& m : materials.regions) m.validate();
  require(materials.taylor_quinney >= 0.0 && materials.taylor_quinney <= 1.0, "Taylor-Quinney factor must lie in [0, 1]");

  const auto& s = weld.schedule;
  require(s.apply_duration > 0.0 && s.hold_duration >= 0.0 && s.pause_duration > 0.0, "torch durations must be positive");
  require(s.dt_min > 0.0 && s.dt_min <= s.dt_initial && s.dt_initial <= s.dt_max, "need dt_min <= dt_initial <= dt_max");
  require(s.interpass_temperature > s.final_temperature, "interpass temperature must exceed the final temperature");
  require(weld.mechanics_interval > 0.0, "mechanics interval must be positive");
  require(weld.probe_depth > 0.0 && weld.probe_depth < 1.0, "probe depth is a fraction of the wall in (0, 1)");

  require(permeation.thickness > 0.0 && permeation.elements >= 2 && permeation.charging > 0.0,
          "permeation strip needs positive thickness, charging and >= 2 elements");
  require(permeation.duration > 1.0 && permeation.steps_per_lag >= 10, "permeation must run past the time lag");

  require(jr.j_max >= 0.0 && jr.max_extension > 0.0 && jr.j_step > 0.0, "J-R loading parameters must be positive");
  require(jr.elements_per_length >= 0.0 && jr.max_passes >= 1, "J-R discretisation settings are invalid");

  require(pipeline.ramp_rate > 0.0, "pressure ramp rate must be positive");
  require(pipeline.pressure_step > 0.0 && pipeline.fine_pressure_step > 0.0, "pressure steps must be positive");
  require(pipeline.max_passes >= 1 && pipeline.max_halvings >= 0, "pipeline stagger settings are invalid");
  require(pipeline.yield_pressure >= 0.0, "yield pressure must be >= 0 (0 selects sigma_y t / r_i)");
  for (const auto& d : defects) validate_defect(d, pipe);

  require(outputs.vtk_every >= 0, "vtk_every must be >= 0");
  require(solver.newton_tolerance > 0.0 && solver.max_iterations >= 1 && solver.max_cuts >= 0,
          "solver tolerances are invalid");
  require(solver.threads >= 1, "thread count must be >= 1");
}

}  // namespace hydroweld
