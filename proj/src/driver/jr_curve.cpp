#include "hydroweld/driver/jr_curve.hpp"

#include "hydroweld/driver/analytic.hpp"
#include "hydroweld/driver/staggered.hpp"
#include "hydroweld/fracture/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hydroweld {

Mesh build_boundary_layer_mesh(const Scenario& sc) {
  BoundaryLayerSpec spec = sc.boundary_layer;
  const auto& mat = sc.materials[sc.jr.region];
  if (sc.jr.elements_per_length > 0.0) spec.tip_size = length_scale(mat) / sc.jr.elements_per_length;
  return generate_boundary_layer_mesh(spec);
}

double j_at_extension(const std::vector<JRPoint>& curve, double da) {
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].delta_a < da) continue;
    if (i == 0) return curve[0].J;
    const auto& a = curve[i - 1];
    const auto& b = curve[i];
    if (b.delta_a == a.delta_a) return b.J;
    return a.J + (da - a.delta_a) / (b.delta_a - a.delta_a) * (b.J - a.J);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

JRResult run_jr_curve(const Scenario& sc, RunLog& log) {
  JRResult res;
  res.mesh = build_boundary_layer_mesh(sc);
  const Mesh& mesh = res.mesh;
  const auto& js = sc.jr;
  // Single-region material set: every element carries the selected region's properties.
  MaterialSet materials = sc.materials;
  for (Region r : kAllRegions) {
    materials[r] = sc.materials[js.region];
    materials[r].region = r;
  }
  const auto& mat = materials[Region::BM];
  res.length_scale = length_scale(mat);
  res.tip_size = mesh.parameters.count("tip_size") ? mesh.parameters.at("tip_size") : sc.boundary_layer.tip_size;
  const double E = mat.youngs(constants::ambient_celsius), nu = mat.poisson;
  const double gc = mat.toughness;
  const double j_max = js.j_max > 0.0 ? js.j_max : 8.0 * gc;
  if (sc.boundary_layer.patch_ahead < js.max_extension + 2.0 * res.length_scale)
    log.warn("crack-tip patch is shorter than the requested extension plus two length scales");

  const MeshGeometry geom(mesh);
  MechanicsOptions mo;
  mo.constitutive.beta = materials.taylor_quinney;
  mo.constitutive.plasticity = js.plasticity;
  mo.tolerance = sc.solver.newton_tolerance;
  mo.max_iterations = sc.solver.max_iterations;
  mo.max_cuts = sc.solver.max_cuts;
  const MechanicsModel mech(mesh, geom, materials, mo);
  const PhaseFieldModel pf(mesh, geom, materials);
  const CoupledSolver coupled(mech, pf);
  StaggerOptions so;
  so.max_passes = js.max_passes;
  so.phase_tolerance = js.stagger_tolerance;

  FieldState state = FieldState::initial(mesh, geom.points_per_element(), constants::ambient_celsius, true);
  const Eigen::VectorXd T = state.temperature;
  // The pre-crack is carried by the phase field too: the row of elements
  // along the crack face starts broken, so the damage band behind the tip
  // exists before loading.
  const int nq = geom.points_per_element();
  std::vector<char> on_face(mesh.num_nodes(), 0);
  for (int n : mesh.node_set("crack_face")) on_face[n] = 1;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const auto nodes = mesh.element(e);
    if (std::count_if(nodes.begin(), nodes.end(), [&](int n) { return on_face[n] != 0; }) < 2) continue;
    for (int q = 0; q < nq; ++q) state.point(e, q, nq).history = pf.broken_history(mesh.regions[e]);
  }
  pf.solve(state, state.phase_field);
  const double a0 = measure_crack_extension(mesh, state.phase_field, mesh.node_path("ligament"));
  const auto& rim = mesh.node_set("outer_rim");
  const auto& ligament = mesh.node_path("ligament");
  auto loads = [&](double K) {
    DisplacementBC bc;
    for (int n : rim) {
      const Vec2 x = mesh.nodes.col(n);
      const auto [ux, uy] = williams_displacements(K, x.norm(), std::atan2(x.y(), x.x()), E, nu);
      bc.add(2 * static_cast<Index>(n), ux);
      bc.add(2 * static_cast<Index>(n) + 1, uy);
    }
    for (int n : mesh.node_set("ligament"))
      if (mesh.nodes(0, n) > 0.0 && std::find(rim.begin(), rim.end(), n) == rim.end())
        bc.add(2 * static_cast<Index>(n) + 1, 0.0);
    return bc;
  };

  double J = 0.0;
  double max_phi = 0.0;
  double scale = 1.0;  // halved after a failed increment, restored on success
  int failures = 0;
  while (J < j_max - 1e-12) {
    // Coarse steps while the response is still essentially undamaged.
    double dJ = scale * (max_phi > 0.3 ? js.j_step : 0.1) * gc;
    dJ = std::min(dJ, j_max - J);
    const double J1 = J + dJ;
    const double K = k_from_j(J1, E, nu);
    FieldState trial = state;
    StaggerReport sr;
    try {
      sr = coupled.solve_increment(trial, T, loads(K), nullptr, so);
    } catch (const SolverFailure& err) {
      if (++failures > 6) throw FatalError(std::string("J-R curve: increment failed repeatedly: ") + err.what());
      scale *= 0.5;
      log.note(std::string("J-R: increment to J = ") + std::to_string(J1) + " cut: " + err.what());
      continue;
    }
    failures = 0;
    scale = std::min(1.0, 2.0 * scale);
    state = std::move(trial);
    J = J1;
    max_phi = state.phase_field.maxCoeff();
    JRPoint pt{K, J, std::max(0.0, measure_crack_extension(mesh, state.phase_field, ligament) - a0), sr.passes,
               sr.converged};
    if (!sr.converged) {
      std::ostringstream os;
      os << "J-R: stagger not converged at J = " << J << " N/mm after " << sr.passes << " passes (dphi "
         << sr.phase_change << ")";
      log.note(os.str());
    }
    res.curve.push_back(pt);
    if (res.initiation_J == 0.0 && pt.delta_a >= res.tip_size * (1.0 - 1e-9)) res.initiation_J = J;
    if (pt.delta_a >= js.max_extension) break;
  }
  const double K_final = res.curve.empty() ? 0.0 : res.curve.back().K;
  res.plastic_zone = irwin_rp(K_final, mat.yield(constants::ambient_celsius));
  res.small_scale_valid = sc.boundary_layer.outer_radius >= 10.0 * res.plastic_zone;
  if (!res.small_scale_valid) {
    std::ostringstream os;
    os << "VALIDITY: outer radius " << sc.boundary_layer.outer_radius << " mm is below 10 R_p = "
       << 10.0 * res.plastic_zone << " mm at the final load; small-scale yielding is not ensured";
    log.warn(os.str());
  }
  res.final_state = std::move(state);
  return res;
}

}  // namespace hydroweld
