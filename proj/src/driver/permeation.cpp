#include "hydroweld/driver/permeation.hpp"

#include "hydroweld/hydrogen/transport.hpp"

#include <cmath>
#include <sstream>

namespace hydroweld {

double time_lag(const std::vector<double>& t, const std::vector<double>& Q, double t_fit) {
  double n = 0.0, st = 0.0, sq = 0.0, stt = 0.0, stq = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_fit) continue;
    n += 1.0;
    st += t[i];
    sq += Q[i];
    stt += t[i] * t[i];
    stq += t[i] * Q[i];
  }
  if (n < 2.0) throw std::invalid_argument("time_lag: fewer than two samples in the fit window");
  const double slope = (n * stq - st * sq) / (n * stt - st * st);
  const double intercept = (sq - slope * st) / n;
  return -intercept / slope;
}

PermeationResult run_permeation(const Scenario& sc, RunLog& log) {
  const auto& ps = sc.permeation;
  const Mesh mesh = generate_strip_mesh(ps.thickness, ps.elements);
  MaterialSet materials = sc.materials;
  for (Region r : kAllRegions) {
    materials[r] = sc.materials[ps.region];
    materials[r].region = r;
  }
  const MeshGeometry geom(mesh);
  TransportOptions to;
  to.traps = ps.traps;
  to.drift = false;
  to.tolerance = sc.solver.transport_tolerance;
  const TransportModel model(mesh, geom, materials, to);

  PermeationResult res;
  const auto& mat = materials[Region::BM];
  res.dilute_diffusivity =
      ps.traps ? dilute_effective_diffusivity(mat.trap_density, materials.traps, mat, to.temperature)
               : mat.lattice_diffusivity;
  const double L = ps.thickness;
  const double lag = L * L / (6.0 * res.dilute_diffusivity);
  const double dt = lag / ps.steps_per_lag;
  const int steps = static_cast<int>(std::ceil(ps.duration * ps.steps_per_lag));

  FieldState state = FieldState::initial(mesh, geom.points_per_element(), constants::ambient_celsius, true);
  ConcentrationBC bcs;
  bcs.add_node_set(mesh.node_set("charging"), ps.charging);
  const auto& exit = mesh.node_set("exit");
  bcs.add_node_set(exit, 0.0);
  std::vector<char> is_exit(mesh.num_nodes(), 0);
  for (int n : exit) is_exit[n] = 1;
  double width = 0.0;
  {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int n : exit) {
      lo = std::min(lo, mesh.nodes(1, n));
      hi = std::max(hi, mesh.nodes(1, n));
    }
    width = hi - lo;
  }
  const Eigen::VectorXd sh = Eigen::VectorXd::Zero(mesh.num_nodes());
  const auto dis = model.dislocation_densities(state);
  double Q = 0.0;
  for (int i = 1; i <= steps; ++i) {
    const auto rep = model.step(state, sh, dis, dt, bcs);
    if (!rep.converged) throw FatalError("permeation: transport step " + std::to_string(i) + " failed");
    state.time += dt;
    double out = 0.0, net = 0.0;
    for (std::size_t k = 0; k < bcs.nodes.size(); ++k) {
      net += rep.nodal_supply[k];
      if (is_exit[bcs.nodes[k]]) out -= rep.nodal_supply[k];
    }
    const double scale = std::max(std::abs(rep.content_after), 1e-300);
    res.conservation_error =
        std::max(res.conservation_error, std::abs(rep.content_after - rep.content_before - dt * net) / scale);
    const double flux = out / width;
    Q += flux * dt;
    res.time.push_back(state.time);
    res.exit_flux.push_back(flux);
    res.cumulative.push_back(Q);
  }
  res.steady_flux = res.exit_flux.back();
  res.time_lag = time_lag(res.time, res.cumulative, 0.6 * ps.duration * lag);
  res.apparent_diffusivity = L * L / (6.0 * res.time_lag);
  std::ostringstream os;
  os << "permeation " << region_name(ps.region) << ": t_lag = " << res.time_lag << " s, D_app = "
     << res.apparent_diffusivity << " mm^2/s (dilute closed form " << res.dilute_diffusivity << ")";
  log.note(os.str());
  return res;
}

}  // namespace hydroweld
