#pragma once

#include "hydroweld/fracture/phase_field.hpp"
#include "hydroweld/hydrogen/transport.hpp"
#include "hydroweld/mechanics/mechanics.hpp"

#include <optional>

namespace hydroweld {

struct StaggerOptions {
  int max_passes = 5;
  double phase_tolerance = 1e-3;      ///< max nodal change of phi between passes
  double hydrogen_tolerance = 1e-3;   ///< max nodal change of C_L relative to the reference
  double hydrogen_reference = 1.0;    ///< C_L,ref [wppm]
};

/// Transport part of an increment.
struct TransportIncrement {
  double dt = 0.0;
  ConcentrationBC bcs;
};

struct StaggerReport {
  int passes = 0;
  bool converged = false;
  double phase_change = 0.0;
  double hydrogen_change = 0.0;
  int mechanics_iterations = 0;
  PhaseFieldReport phase;
  std::optional<TransportReport> transport;
};

/// Alternating solution of deformation, fracture and (optionally) hydrogen
/// transport within one load increment. Each pass re-solves mechanics from
/// the committed start-of-increment history with the latest phi and C_L,
/// updates phi with the new history (irreversible with respect to the start
/// of the increment) and re-integrates transport over the increment.
class CoupledSolver {
 public:
  CoupledSolver(const MechanicsModel& mechanics, const PhaseFieldModel& fracture,
                const TransportModel* transport = nullptr);

  /// Advance `state` by one increment. Throws SolverFailure when a
  /// sub-solver fails; the state is then unchanged.
  StaggerReport solve_increment(FieldState& state, const Eigen::VectorXd& temperature, const DisplacementBC& bcs,
                                const TransportIncrement* transport, const StaggerOptions& options) const;

 private:
  const MechanicsModel* mech_;
  const PhaseFieldModel* pf_;
  const TransportModel* transport_;
};

}  // namespace hydroweld
