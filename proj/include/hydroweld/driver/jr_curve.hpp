#pragma once

#include "hydroweld/driver/scenario.hpp"
#include "hydroweld/mesh/state.hpp"

#include <vector>

namespace hydroweld {

struct JRPoint {
  double K = 0.0;            ///< applied stress intensity [MPa sqrt(mm)]
  double J = 0.0;            ///< applied J [N/mm]
  double delta_a = 0.0;      ///< crack extension [mm]
  int passes = 0;
  bool converged = false;
};

struct JRResult {
  std::vector<JRPoint> curve;
  double tip_size = 0.0;         ///< element size in the tip patch [mm]
  double length_scale = 0.0;     ///< l of the region [mm]
  double initiation_J = 0.0;     ///< J at the first extension of one element (0 if none)
  double plastic_zone = 0.0;     ///< Irwin estimate at the final load [mm]
  bool small_scale_valid = true; ///< R_outer >= 10 R_p at the final load
  Mesh mesh;
  FieldState final_state;
};

/// Boundary-layer mesh for a J-R scenario: tip size l / elements_per_length.
Mesh build_boundary_layer_mesh(const Scenario& scenario);

/// Remote K-field loading of a boundary-layer model without hydrogen; J is
/// ramped (finer steps once damage appears) until the crack has grown by
/// max_extension or J reaches j_max.
JRResult run_jr_curve(const Scenario& scenario, RunLog& log);

/// J at which the curve first reaches the given extension (linear
/// interpolation); NaN when it never does.
double j_at_extension(const std::vector<JRPoint>& curve, double delta_a);

}  // namespace hydroweld
