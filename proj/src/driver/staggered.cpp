#include "hydroweld/driver/staggered.hpp"

#include "hydroweld/fem/projection.hpp"

#include <algorithm>

namespace hydroweld {

CoupledSolver::CoupledSolver(const MechanicsModel& mechanics, const PhaseFieldModel& fracture,
                             const TransportModel* transport)
    : mech_(&mechanics), pf_(&fracture), transport_(transport) {}

StaggerReport CoupledSolver::solve_increment(FieldState& state, const Eigen::VectorXd& T, const DisplacementBC& bcs,
                                             const TransportIncrement* inc, const StaggerOptions& opt) const {
  const FieldState start = state;
  const MeshGeometry& geom = mech_->geometry();
  const bool with_transport = transport_ && inc;
  std::vector<double> dis_old;
  if (with_transport) dis_old = transport_->dislocation_densities(start);

  StaggerReport rep;
  FieldState current = start;
  for (int pass = 1; pass <= opt.max_passes; ++pass) {
    FieldState trial = start;
    trial.displacement = current.displacement;
    trial.phase_field = current.phase_field;
    trial.lattice_hydrogen = current.lattice_hydrogen;
    const auto mr = mech_->solve(trial, T, bcs);
    rep.mechanics_iterations += mr.iterations;

    rep.phase = pf_->solve(trial, start.phase_field);
    rep.phase_change = (trial.phase_field - current.phase_field).cwiseAbs().maxCoeff();

    rep.hydrogen_change = 0.0;
    if (with_transport) {
      transport_->update_trap_densities(trial);
      Eigen::VectorXd sh_points(geom.num_points());
      for (Index p = 0; p < sh_points.size(); ++p) sh_points(p) = mandel::trace(trial.points[p].stress) / 3.0;
      const Eigen::VectorXd sh = fem::project_to_nodes(geom, trial.active, sh_points);
      const Eigen::VectorXd c_pass = trial.lattice_hydrogen;
      trial.lattice_hydrogen = start.lattice_hydrogen;
      const auto tr = transport_->step(trial, sh, dis_old, inc->dt, inc->bcs);
      if (!tr.converged) throw SolverFailure("hydrogen transport step rejected");
      rep.transport = tr;
      rep.hydrogen_change =
          (trial.lattice_hydrogen - c_pass).cwiseAbs().maxCoeff() / std::max(opt.hydrogen_reference, 1e-300);
    }
    current = std::move(trial);
    rep.passes = pass;
    if (rep.phase_change < opt.phase_tolerance && rep.hydrogen_change < opt.hydrogen_tolerance) {
      rep.converged = true;
      break;
    }
  }
  state = std::move(current);
  return rep;
}

}  // namespace hydroweld
