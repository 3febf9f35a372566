#pragma once

#include "hydroweld/mesh/mesh.hpp"

#include <vector>

namespace hydroweld {

/// Quadrature-point history.
struct PointHistory {
  Mandel plastic_strain = Mandel::Zero();
  double eq_plastic_strain = 0.0;
  /// Crack driving force, max over time of psi_e^+ + beta psi_p [MPa].
  double history = 0.0;
  /// Dislocation trap density [sites/mm^3]; zero means "not yet initialised".
  double trap_density = 0.0;
  Mandel stress = Mandel::Zero();
  /// Strain at which the point became part of the body (strain-free insertion).
  Mandel strain_offset = Mandel::Zero();
  /// Set on activation; the mechanics solver records the offset on first use.
  bool pending_offset = false;

  friend bool operator==(const PointHistory&, const PointHistory&) = default;
};

/// Nodal fields plus per-point history for one simulation.
struct FieldState {
  Eigen::VectorXd displacement;      ///< 2 per node (r, z) or (x, y) [mm]
  Eigen::VectorXd temperature;       ///< [degC]
  Eigen::VectorXd lattice_hydrogen;  ///< C_L [wppm]
  Eigen::VectorXd phase_field;       ///< phi [-]
  std::vector<PointHistory> points;  ///< element-major, see MeshGeometry::point_index
  std::vector<char> active;          ///< element activation mask
  double time = 0.0;

  /// Zero fields at uniform temperature. With `all_active` false, bead
  /// elements start inactive.
  static FieldState initial(const Mesh& mesh, int points_per_element, double temperature, bool all_active = true);

  PointHistory& point(Index e, int q, int nq) { return points[static_cast<std::size_t>(e * nq + q)]; }
  const PointHistory& point(Index e, int q, int nq) const { return points[static_cast<std::size_t>(e * nq + q)]; }
};

/// Bring bead k (1-based) into the body: its elements start contributing to
/// all assemblies, its nodes are set to `T_init` and its points start stress
/// free. Throws std::logic_error when the bead is already active.
FieldState activate_bead(const Mesh& mesh, FieldState state, int bead, double T_init);

/// True when every element of bead k is active.
bool bead_active(const Mesh& mesh, const FieldState& state, int bead);

}  // namespace hydroweld
