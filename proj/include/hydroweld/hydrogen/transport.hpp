#pragma once

#include "hydroweld/hydrogen/traps.hpp"
#include "hydroweld/mesh/state.hpp"

#include <vector>

namespace hydroweld {

struct TransportOptions {
  double temperature = constants::transport_temperature;  ///< [K]
  double crack_enhancement = 1000.0;                      ///< k_d
  double crack_threshold = 0.9;                           ///< phi_th
  bool drift = true;
  bool traps = true;
  double tolerance = 1e-8;
  int max_iterations = 25;
  /// Negative nodal C_L below -this * max(C_L) rejects the step.
  double negativity_tolerance = 1e-12;
  friend bool operator==(const TransportOptions&, const TransportOptions&) = default;
};

/// Prescribed lattice concentration [wppm] on nodes.
struct ConcentrationBC {
  std::vector<int> nodes;
  std::vector<double> values;
  void add_node_set(const std::vector<int>& set, double value) {
    for (int n : set) {
      nodes.push_back(n);
      values.push_back(value);
    }
  }
};

struct TransportReport {
  bool converged = false;
  int iterations = 0;
  double min_concentration = 0.0;
  double content_before = 0.0;  ///< total lattice + trapped hydrogen [wppm mm^3]
  double content_after = 0.0;
  double lattice_before = 0.0;
  double lattice_after = 0.0;
  double inflow = 0.0;          ///< hydrogen supplied through prescribed nodes over the step
  /// Net rate supplied at each prescribed node (negative: outflow) [wppm mm^3/s].
  std::vector<double> nodal_supply;
};

/// Isothermal multi-trap hydrogen transport in conservative form: backward
/// Euler on the total (lattice + Oriani-trapped) content with lumped storage,
/// lattice diffusion, hydrostatic-stress drift and crack-enhanced
/// diffusivity. Trap creation by plastic straining enters through the change
/// of dislocation trap density over the step (Krom term).
class TransportModel {
 public:
  TransportModel(const Mesh& mesh, const MeshGeometry& geometry, const MaterialSet& materials,
                 TransportOptions options = {});

  const TransportOptions& options() const { return options_; }

  /// Element-mean trap densities per family for the given point densities.
  std::array<double, kTrapKinds> element_densities(Index e, const std::vector<PointHistory>& points) const;
  /// Same, with the dislocation family taken from `dislocation` (per point).
  std::array<double, kTrapKinds> element_densities(Index e, const std::vector<double>& dislocation) const;

  /// Total hydrogen content (lattice + trapped) of the active elements.
  double total_content(const FieldState& state) const;
  double total_content(const Eigen::VectorXd& c, const std::vector<double>& dislocation,
                       const std::vector<char>& active) const;
  double lattice_content(const Eigen::VectorXd& c, const std::vector<char>& active) const;
  /// Per-point trapped concentration per family [wppm].
  std::vector<TrapEquilibrium> point_trapping(const FieldState& state) const;

  /// One implicit step. `hydrostatic` is the nodal sigma_H [MPa];
  /// `previous_dislocation` holds per-point dislocation trap densities at the
  /// start of the step (the state's point densities are the end values).
  /// Updates state.lattice_hydrogen on success. Rejected steps (no
  /// convergence or negativity) leave the state untouched.
  TransportReport step(FieldState& state, const Eigen::VectorXd& hydrostatic,
                       const std::vector<double>& previous_dislocation, double dt, const ConcentrationBC& bcs) const;

  /// Fill each active point's dislocation trap density from its plastic strain.
  void update_trap_densities(FieldState& state) const;
  std::vector<double> dislocation_densities(const FieldState& state) const;

 private:
  const Mesh* mesh_;
  const MeshGeometry* geometry_;
  const MaterialSet* materials_;
  TransportOptions options_;
  int npe_, nq_;
  std::vector<double> lumped_;
  int dislocation_index_ = 0;
};

/// Free-function form; equivalent to TransportModel::step.
TransportReport solve_transport_step(const TransportModel& model, FieldState& state, const Eigen::VectorXd& hydrostatic,
                                     const std::vector<double>& previous_dislocation, double dt,
                                     const ConcentrationBC& bcs);

}  // namespace hydroweld
