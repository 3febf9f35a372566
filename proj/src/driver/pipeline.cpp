#include "hydroweld/driver/pipeline.hpp"

#include "hydroweld/driver/analytic.hpp"
#include "hydroweld/driver/staggered.hpp"
#include "hydroweld/hydrogen/traps.hpp"

#include <cmath>
#include <sstream>

namespace hydroweld {

std::string_view failure_mode_name(FailureMode m) {
  return m == FailureMode::Fracture ? "fracture" : "plastic-collapse";
}

PipelineResult run_pipeline(const Scenario& sc, const Mesh& mesh, const ResidualState* residual, RunLog& log,
                            const PipelineObserver& observer) {
  const auto& ps = sc.pipeline;
  const MeshGeometry geom(mesh);
  const int nq = geom.points_per_element();

  MechanicsOptions mo;
  mo.constitutive.beta = sc.materials.taylor_quinney;
  mo.tolerance = sc.solver.newton_tolerance;
  mo.max_iterations = sc.solver.max_iterations;
  mo.max_cuts = sc.solver.max_cuts;
  const MechanicsModel mech(mesh, geom, sc.materials, mo);
  const PhaseFieldModel pf(mesh, geom, sc.materials);
  TransportOptions to;
  to.tolerance = sc.solver.transport_tolerance;
  const TransportModel transport(mesh, geom, sc.materials, to);
  const CoupledSolver coupled(mech, pf, ps.hydrogen ? &transport : nullptr);

  PipelineResult res;
  FieldState state = FieldState::initial(mesh, nq, constants::ambient_celsius, true);
  if (residual) state = transfer_state(mesh, *residual, std::move(state));
  transport.update_trap_densities(state);
  const Eigen::VectorXd T = state.temperature;
  const Eigen::VectorXd u0 = state.displacement;

  const auto& bm = sc.materials[Region::BM];
  const double E = bm.youngs(constants::ambient_celsius), nu = bm.poisson;
  const double ri = sc.pipe.inner_radius, t = sc.pipe.thickness;
  res.yield_pressure = ps.yield_pressure > 0.0 ? ps.yield_pressure
                                               : yield_pressure(bm.yield(constants::ambient_celsius), t, ri);
  auto loads = [&](double p) {
    const auto [ur, ul] = lame_displacements(p, ri, t, sc.pipe.length, E, nu);
    DisplacementBC bc;
    for (int n : mesh.node_set("outer_surface")) bc.add(2 * Index{n}, u0(2 * n) + ur);
    for (int n : mesh.node_set("left_edge")) bc.add(2 * Index{n} + 1, u0(2 * n + 1) - ul);
    for (int n : mesh.node_set("right_edge")) bc.add(2 * Index{n} + 1, u0(2 * n + 1) + ul);
    return bc;
  };
  if (residual) {
    res.transfer_equilibrium = mech.equilibrium_error(state, loads(0.0));
    std::ostringstream os;
    os << "pipeline: relative internal-force residual after transfer " << res.transfer_equilibrium;
    log.note(os.str());
    if (res.transfer_equilibrium > 1e-4) log.warn("transferred residual state is not self-equilibrated: " + os.str());
  }

  // Defects: broken points carry a history that drives phi to one.
  res.defects = seed_defects(mesh, geom, sc.defects, sc.pipe, sc.refinement, sc.seed);
  for (const auto& d : res.defects) {
    for (Index p : d.points) {
      auto& pt = state.points[p];
      pt.history = std::max(pt.history, pf.broken_history(mesh.regions[p / nq]));
    }
    log.note("defect " + std::string(defect_name(d.type)) + ": " + std::to_string(d.points.size()) + " points, " +
             d.placement);
  }
  if (!res.defects.empty()) pf.solve(state, state.phase_field);
  std::vector<char> seeded(mesh.num_nodes(), 0);
  for (Index n = 0; n < mesh.num_nodes(); ++n) seeded[n] = state.phase_field(n) >= 0.5;

  StaggerOptions so;
  so.max_passes = ps.max_passes;
  so.phase_tolerance = ps.stagger_tolerance;
  so.hydrogen_tolerance = ps.stagger_tolerance;
  const double s = bm.solubility;

  double p = 0.0;
  double dp_base = ps.pressure_step;
  while (true) {
    double dp = std::min(dp_base, res.yield_pressure - p);
    FieldState trial;
    StaggerReport sr;
    double p1 = p;
    for (int halving = 0;; ++halving) {
      p1 = std::min(p + dp, res.yield_pressure);
      trial = state;
      TransportIncrement inc;
      inc.dt = (p1 - p) / ps.ramp_rate;
      const double cb = sievert_boundary(p1, s);
      inc.bcs.add_node_set(mesh.node_set("inner_surface"), cb);
      inc.bcs.add_node_set(mesh.node_set("outer_surface"), 0.0);
      so.hydrogen_reference = std::max(cb, 1e-12);
      try {
        sr = coupled.solve_increment(trial, T, loads(p1), ps.hydrogen ? &inc : nullptr, so);
        trial.time = state.time + inc.dt;
        break;
      } catch (const SolverFailure& err) {
        if (halving >= ps.max_halvings) {
          std::ostringstream os;
          os << "pipeline: increment from p = " << p << " MPa failed after " << halving << " halvings: " << err.what();
          throw FatalError(os.str());
        }
        log.note("pipeline: cutting increment at p = " + std::to_string(p) + " MPa: " + err.what());
        dp *= 0.5;
      }
    }
    state = std::move(trial);
    p = p1;
    PipelineIncrement inc{p, state.time, sr.passes, sr.converged, state.phase_field.maxCoeff(),
                          ps.hydrogen ? sievert_boundary(p, s) : 0.0,
                          ps.hydrogen ? transport.total_content(state) : 0.0};
    res.history.push_back(inc);
    if (!sr.converged) {
      std::ostringstream os;
      os << "pipeline: stagger stopped after " << sr.passes << " passes at p = " << p << " MPa (dphi "
         << sr.phase_change << ", dC " << sr.hydrogen_change << ")";
      log.note(os.str());
    }
    if (!res.initiated) {
      double best = 0.5;
      for (Index n = 0; n < mesh.num_nodes(); ++n)
        if (!seeded[n] && state.phase_field(n) >= best) {
          best = state.phase_field(n);
          res.initiation = mesh.nodes.col(n);
          res.initiated = true;
        }
      if (res.initiated) res.initiation_pressure = p;
    }
    if (observer) observer(inc, state);
    res.crack = detect_through_thickness(mesh, state.phase_field);
    if (res.crack.connected) {
      res.mode = FailureMode::Fracture;
      res.failure_pressure = p;
      break;
    }
    if (p >= res.yield_pressure - 1e-12) {
      res.mode = FailureMode::PlasticCollapse;
      res.failure_pressure = res.yield_pressure;
      break;
    }
    if (inc.max_phi >= ps.refine_threshold) dp_base = std::min(dp_base, ps.fine_pressure_step);
  }
  std::ostringstream os;
  os << "pipeline: " << failure_mode_name(res.mode) << " at p = " << res.failure_pressure << " MPa after "
     << res.history.size() << " increments";
  log.note(os.str());
  res.final_state = std::move(state);
  return res;
}

}  // namespace hydroweld
