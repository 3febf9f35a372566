#include "hydroweld/driver/weld.hpp"

#include "hydroweld/fem/projection.hpp"
#include "hydroweld/hydrogen/traps.hpp"
#include "hydroweld/materials/constitutive.hpp"
#include "hydroweld/mechanics/mechanics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hydroweld {

Mesh build_pipe_mesh(const Scenario& sc) { return generate_pipe_weld_mesh(sc.pipe, sc.refinement); }

namespace {

double distance_to_polyline(const Mesh& mesh, const std::vector<int>& path, const Vec2& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Vec2 a = mesh.nodes.col(path[i]), b = mesh.nodes.col(path[i + 1]);
    const Vec2 ab = b - a;
    const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    best = std::min(best, (a + t * ab - p).norm());
  }
  return best;
}

}  // namespace

double extract_haz_width(const Mesh& mesh, const Eigen::VectorXd& peak, const std::vector<int>& line, double T_haz,
                         RunLog* log) {
  double side = 0.0;
  for (int n : line) side += mesh.nodes(1, n);
  side = side >= 0.0 ? 1.0 : -1.0;
  const fem::ReferenceQuad ref(mesh.order);
  double width = 0.0;
  bool found = false;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (mesh.regions[e] == Region::WM) continue;
    if (mesh.element_centroid(e).y() * side < 0.0) continue;
    const auto conn = mesh.element(e);
    for (int k = 0; k < 4; ++k) {
      const auto en = ref.edge_nodes(k);
      for (std::size_t i = 0; i + 1 < en.size(); ++i) {
        const int a = conn[en[i]], b = conn[en[i + 1]];
        const double ta = peak(a), tb = peak(b);
        if ((ta >= T_haz) == (tb >= T_haz)) continue;
        const double s = (T_haz - ta) / (tb - ta);
        const Vec2 x = mesh.nodes.col(a) + s * (mesh.nodes.col(b) - mesh.nodes.col(a));
        width = std::max(width, distance_to_polyline(mesh, line, x));
        found = true;
      }
    }
  }
  if (!found && log) log->warn("HAZ contour at " + std::to_string(T_haz) + " degC not found outside the weld metal");
  return width;
}

std::array<Eigen::VectorXd, 4> project_stress(const MeshGeometry& geom, const FieldState& state) {
  std::array<Eigen::VectorXd, 4> out;
  Eigen::VectorXd v(geom.num_points());
  for (int c = 0; c < 4; ++c) {
    for (Index p = 0; p < v.size(); ++p) v(p) = state.points[p].stress(c);
    out[c] = fem::project_to_nodes(geom, state.active, v);
  }
  return out;
}

LineSample sample_principal_stress(const Mesh& mesh, const std::array<Eigen::VectorXd, 4>& s, double ri, double t,
                                   double fraction) {
  LineSample ls;
  ls.fraction = fraction;
  const double target = ri + fraction * t;
  double best = std::numeric_limits<double>::infinity();
  for (Index n = 0; n < mesh.num_nodes(); ++n) best = std::min(best, std::abs(mesh.nodes(0, n) - target));
  std::vector<std::pair<double, double>> row;
  for (Index n = 0; n < mesh.num_nodes(); ++n) {
    if (std::abs(std::abs(mesh.nodes(0, n) - target) - best) > 1e-9) continue;
    const Mandel m(s[0](n), s[1](n), s[2](n), s[3](n));
    row.emplace_back(mesh.nodes(1, n), mandel::max_principal(m));
    ls.radius = mesh.nodes(0, n);
  }
  std::sort(row.begin(), row.end());
  for (const auto& [z, v] : row) {
    ls.z.push_back(z);
    ls.max_principal.push_back(v);
  }
  return ls;
}

WeldResult run_weld(const Scenario& sc, const Mesh& mesh, RunLog& log) {
  const MeshGeometry geom(mesh);
  const int nq = geom.points_per_element();
  // The HAZ is an outcome of the weld: during welding its band is base metal.
  MaterialSet materials = sc.materials;
  materials[Region::HAZ] = materials[Region::BM];
  materials[Region::HAZ].region = Region::HAZ;
  const ThermalModel thermal(mesh, geom, materials);
  const auto& ws = sc.weld;
  FieldState state = FieldState::initial(mesh, nq, ws.exchange.ambient, false);

  MechanicsOptions mo;
  mo.constitutive.beta = sc.materials.taylor_quinney;
  mo.constitutive.reference_temperature = ws.exchange.ambient;
  mo.tolerance = sc.solver.newton_tolerance;
  mo.max_iterations = sc.solver.max_iterations;
  mo.max_cuts = sc.solver.max_cuts;
  const MechanicsModel mech(mesh, geom, materials, mo);
  DisplacementBC bc;
  bc.add_node_set(mesh.node_set("left_edge"), 1, 0.0);
  bc.add_node_set(mesh.node_set("right_edge"), 1, 0.0);

  WeldResult res;
  FieldState ms = state;
  Eigen::VectorXd T_last = state.temperature;
  auto solve_to = [&](const Eigen::VectorXd& T, int bead, double time) {
    try {
      const auto rep = mech.advance(ms, T_last, T, bc, bc);
      res.mechanics_solves += 1 + rep.cuts;
    } catch (const SolverFailure& err) {
      std::ostringstream os;
      os << "weld mechanics failed during bead " << bead << " at t = " << time << " s: " << err.what();
      throw FatalError(os.str());
    }
    T_last = T;
  };
  TorchObserver observer;
  if (ws.mechanics)
    observer = [&](TorchEvent ev, int bead, const FieldState& s) {
      if (ev == TorchEvent::Activated) {
        ms = activate_bead(mesh, std::move(ms), bead, ws.schedule.melt_temperature);
        T_last = s.temperature;
        solve_to(s.temperature, bead, s.time);
        return;
      }
      const auto act = active_nodes(mesh, s.active);
      double change = 0.0;
      for (Index n = 0; n < mesh.num_nodes(); ++n)
        if (act[n]) change = std::max(change, std::abs(s.temperature(n) - T_last(n)));
      if (ev == TorchEvent::Step && change < ws.mechanics_interval) return;
      if (change > 0.0) solve_to(s.temperature, bead, s.time);
    };

  // Probe at the given distance from the left fusion line near the outer surface.
  const double alpha = 0.5 * sc.pipe.weld_angle * constants::pi / 180.0;
  const double rp = sc.pipe.inner_radius + ws.probe_depth * sc.pipe.thickness;
  res.probe = Vec2(rp, -(sc.pipe.groove_half_width(rp, sc.refinement.root_gap) + ws.probe_offset / std::cos(alpha)));
  std::vector<Vec2> probes{res.probe};
  for (const auto& p : sc.outputs.probes) probes.push_back(p);

  res.thermal = run_torch_protocol(thermal, state, ws.schedule, ws.exchange, probes, observer);
  res.probe_pass_peaks = res.thermal.probes.front().pass_peak;
  if (ws.mechanics) {
    ms.temperature = state.temperature;
    double change = (state.temperature - T_last).cwiseAbs().maxCoeff();
    if (change > 0.0) solve_to(state.temperature, mesh.n_beads, state.time);
  }
  ms.temperature = state.temperature;
  ms.time = state.time;

  // Dislocation trap densities implied by the weld plastic strain.
  int dis = 0;
  for (int i = 0; i < kTrapKinds; ++i)
    if (sc.materials.traps[i].evolving) dis = i;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const double n0 = sc.materials[mesh.regions[e]].trap_density[dis];
    for (int q = 0; q < nq; ++q) {
      auto& p = ms.points[e * nq + q];
      p.trap_density = trap_density_evolution(n0, p.eq_plastic_strain).density;
    }
  }

  res.haz_width = std::max(extract_haz_width(mesh, res.thermal.peak_temperature, mesh.node_path("fusion_left"),
                                             ws.haz_temperature, &log),
                           extract_haz_width(mesh, res.thermal.peak_temperature, mesh.node_path("fusion_right"),
                                             ws.haz_temperature, &log));
  const auto nodal = project_stress(geom, ms);
  for (double f : {0.1, 0.5, 0.9})
    res.lines.push_back(sample_principal_stress(mesh, nodal, sc.pipe.inner_radius, sc.pipe.thickness, f));
  auto zone_max = [&](const LineSample& ls) {
    const double limit = sc.pipe.groove_half_width(ls.radius, sc.refinement.root_gap) +
                         sc.refinement.haz_width / std::cos(alpha);
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ls.z.size(); ++i)
      if (std::abs(ls.z[i]) <= limit) m = std::max(m, ls.max_principal[i]);
    return m;
  };
  res.root_stress = zone_max(res.lines[0]);
  res.cap_stress = zone_max(res.lines[2]);
  res.residual = capture_residual_state(mesh, ms, res.thermal.peak_temperature, nq);
  res.final_state = std::move(ms);
  std::ostringstream os;
  os << "weld: " << res.thermal.steps << " thermal steps (" << res.thermal.rejected << " rejected), "
     << res.mechanics_solves << " mechanics solves, end time " << state.time << " s";
  log.note(os.str());
  return res;
}

}  // namespace hydroweld
