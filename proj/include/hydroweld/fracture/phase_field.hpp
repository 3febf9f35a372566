#pragma once

#include "hydroweld/fem/scalar_operators.hpp"
#include "hydroweld/materials/constitutive.hpp"
#include "hydroweld/mesh/state.hpp"

#include <Eigen/Core>
#include <vector>

namespace hydroweld {

struct PhaseFieldReport {
  /// Largest amount by which the raw solution left [0, 1] before clamping.
  double bound_violation = 0.0;
  /// Largest decrease of the raw solution below the previous field (removed).
  double irreversibility_violation = 0.0;
  double max_phi = 0.0;
};

/// AT2 phase-field equation Gc (phi / l - l lap(phi)) = 2 (1 - phi) H with
/// region-wise length scale and pointwise hydrogen-degraded toughness.
/// Natural boundary conditions; the diffusion term is discretely upwinded
/// and the reaction term lumped, so the discrete solution obeys the maximum
/// principle.
class PhaseFieldModel {
 public:
  PhaseFieldModel(const Mesh& mesh, const MeshGeometry& geometry, const MaterialSet& materials);

  /// Length scale of a region from its undegraded toughness [mm].
  double length_scale(Region r) const { return length_[static_cast<int>(r)]; }
  /// Toughness and length scale at a point for lattice hydrogen c.
  std::pair<double, double> point_properties(Index e, double c) const;

  /// Solve for phi given per-point H and nodal C_L on the active elements,
  /// then enforce phi >= previous and 0 <= phi <= 1. Inactive nodes keep
  /// their previous value.
  PhaseFieldReport solve(Eigen::VectorXd& phi, const Eigen::VectorXd& previous, const std::vector<double>& history,
                         const Eigen::VectorXd& lattice_hydrogen, const std::vector<char>& active) const;
  /// Same, taking H from the state's points and updating state.phase_field
  /// with `previous` as the irreversibility floor.
  PhaseFieldReport solve(FieldState& state, const Eigen::VectorXd& previous) const;

  /// Regularized crack surface energy: integral of Gc (phi^2 / 2l + l/2 |grad phi|^2).
  double crack_energy(const FieldState& state) const;

  /// History value that encodes an initially broken point.
  double broken_history(Region r) const;

 private:
  const Mesh* mesh_;
  const MeshGeometry* geometry_;
  const MaterialSet* materials_;
  fem::ScalarOperators ops_;
  std::array<double, 3> length_{};
};

/// Free-function form: returns the new phase field.
Eigen::VectorXd solve_phasefield_step(const PhaseFieldModel& model, const FieldState& state,
                                      const std::vector<double>& history, const Eigen::VectorXd& lattice_hydrogen,
                                      PhaseFieldReport* report = nullptr);

}  // namespace hydroweld
