#pragma once

#include "hydroweld/driver/residual_state.hpp"
#include "hydroweld/driver/scenario.hpp"
#include "hydroweld/thermal/thermal.hpp"

#include <vector>

namespace hydroweld {

/// Pipe/weld mesh for a scenario.
Mesh build_pipe_mesh(const Scenario& scenario);

/// Maximum distance from the fusion line to the T_haz contour of the peak
/// temperature, searched on the base-metal side of that line (edges of
/// non-WM elements whose centroids lie on the same side of the weld
/// centreline as the line). Zero, with a warning in `log`, when the contour
/// does not exist there.
double extract_haz_width(const Mesh& mesh, const Eigen::VectorXd& peak_temperature, const std::vector<int>& fusion_line,
                         double T_haz, RunLog* log = nullptr);

/// Maximum principal stress sampled along the node row closest to
/// r = r_i + fraction * t.
struct LineSample {
  double fraction = 0.0;
  double radius = 0.0;
  std::vector<double> z;
  std::vector<double> max_principal;
};

/// Nodal (lumped L2) projection of the point stresses, 4 components.
std::array<Eigen::VectorXd, 4> project_stress(const MeshGeometry& geometry, const FieldState& state);

LineSample sample_principal_stress(const Mesh& mesh, const std::array<Eigen::VectorXd, 4>& nodal_stress,
                                   double inner_radius, double thickness, double fraction);

struct WeldResult {
  ResidualState residual;
  FieldState final_state;
  TorchResult thermal;
  double haz_width = 0.0;
  std::vector<LineSample> lines;  ///< at 0.1, 0.5 and 0.9 t
  double root_stress = 0.0;       ///< max sigma_I near the root within the weld zone
  double cap_stress = 0.0;        ///< same near the cap
  Vec2 probe;                     ///< peak-temperature probe position
  std::vector<double> probe_pass_peaks;
  int mechanics_solves = 0;
};

/// Sequentially coupled multi-pass weld: the torch protocol drives the
/// temperature, and the mechanics follows the temperature history with the
/// lateral edges clamped axially.
WeldResult run_weld(const Scenario& scenario, const Mesh& mesh, RunLog& log);

}  // namespace hydroweld
