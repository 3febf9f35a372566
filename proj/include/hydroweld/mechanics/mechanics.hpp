#pragma once

#include "hydroweld/fem/sparse_system.hpp"
#include "hydroweld/materials/constitutive.hpp"
#include "hydroweld/mesh/state.hpp"

#include <memory>
#include <vector>

namespace hydroweld {

/// Prescribed displacement components; dof = 2 * node + component.
struct DisplacementBC {
  std::vector<Index> dofs;
  std::vector<double> values;
  void add(Index dof, double value) {
    dofs.push_back(dof);
    values.push_back(value);
  }
  void add_node_set(const std::vector<int>& nodes, int component, double value) {
    for (int n : nodes) add(2 * static_cast<Index>(n) + component, value);
  }
};

struct MechanicsOptions {
  ConstitutiveOptions constitutive;
  bool bbar = true;            ///< mean-dilatation B-bar against volumetric locking
  double tolerance = 1e-8;     ///< relative residual norm
  double absolute_tolerance = 1e-9;  ///< [N]
  int max_iterations = 30;
  int max_cuts = 8;            ///< increment bisections in advance()
};

struct MechanicsReport {
  bool converged = false;
  int iterations = 0;
  int cuts = 0;
  double residual = 0.0;
};

/// Quasi-static small-strain equilibrium with thermo-elasto-plasticity and
/// phase-field degradation, on the active elements.
class MechanicsModel {
 public:
  MechanicsModel(const Mesh& mesh, const MeshGeometry& geometry, const MaterialSet& materials,
                 MechanicsOptions options = {});

  const MechanicsOptions& options() const { return options_; }
  MechanicsOptions& options() { return options_; }
  const Mesh& mesh() const { return *mesh_; }
  const MeshGeometry& geometry() const { return *geometry_; }

  /// Strain-displacement matrix (4 x 2 npe) at point q of element e,
  /// B-bar corrected when enabled.
  Eigen::Matrix<double, 4, Eigen::Dynamic> strain_matrix(Index e, int q) const;
  /// Total strain at a point for the displacement field u.
  Mandel strain(const Eigen::VectorXd& u, Index e, int q) const;

  /// Solve for equilibrium at nodal temperature T with the state's phase
  /// field. Commits displacements and point histories on success; throws
  /// SolverFailure (state untouched) otherwise.
  MechanicsReport solve(FieldState& state, const Eigen::VectorXd& temperature, const DisplacementBC& bcs) const;

  /// Advance from (T0, bc0) to (T1, bc1), bisecting the increment on failure.
  /// The prescribed values are interpolated linearly; dofs must match.
  MechanicsReport advance(FieldState& state, const Eigen::VectorXd& T0, const Eigen::VectorXd& T1,
                          const DisplacementBC& bc0, const DisplacementBC& bc1) const;

  /// Internal force vector from the stored point stresses.
  Eigen::VectorXd internal_force(const FieldState& state) const;
  /// Norm of the internal force at unconstrained dofs relative to the norm at
  /// all dofs (self-equilibrium measure).
  double equilibrium_error(const FieldState& state, const DisplacementBC& bcs) const;

  /// Per-point hydrostatic stress and von Mises stress.
  Eigen::VectorXd hydrostatic_stress(const FieldState& state) const;

 private:
  const Mesh* mesh_;
  const MeshGeometry* geometry_;
  const MaterialSet* materials_;
  MechanicsOptions options_;
  int npe_, nq_;
};

}  // namespace hydroweld
