#include "hydroweld/thermal/thermal.hpp"

#include "hydroweld/fem/newton.hpp"
#include "hydroweld/fem/sparse_system.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace hydroweld {

EnthalpyTable::EnthalpyTable(const MaterialRegion& m) : rho_(m.density), c_(m.specific_heat) {
  std::set<double> k(rho_.temperatures().begin(), rho_.temperatures().end());
  k.insert(c_.temperatures().begin(), c_.temperatures().end());
  k.insert(21.0);
  knots_.assign(k.begin(), k.end());
  cumulative_.assign(knots_.size(), 0.0);
  for (std::size_t i = 1; i < knots_.size(); ++i) cumulative_[i] = cumulative_[i - 1] + segment(knots_[i - 1], knots_[i]);
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), 21.0);
  const double shift = cumulative_[static_cast<std::size_t>(it - knots_.begin())];
  for (double& v : cumulative_) v -= shift;
}

double EnthalpyTable::capacity(double T) const { return rho_(T) * c_(T); }

double EnthalpyTable::segment(double a, double b) const {
  // rho c is quadratic between knots: Simpson's rule is exact.
  return (b - a) / 6.0 * (capacity(a) + 4.0 * capacity(0.5 * (a + b)) + capacity(b));
}

double EnthalpyTable::operator()(double T) const {
  if (T <= knots_.front()) return cumulative_.front() - capacity(knots_.front()) * (knots_.front() - T);
  if (T >= knots_.back()) return cumulative_.back() + capacity(knots_.back()) * (T - knots_.back());
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), T);
  const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  return cumulative_[i] + segment(knots_[i], T);
}

double ThermalBC::flux(double T) const {
  double q = 0.0;
  if (kind == ThermalBCKind::Convection || kind == ThermalBCKind::Combined) q += film * (T - ambient);
  if (kind == ThermalBCKind::Radiation || kind == ThermalBCKind::Combined) {
    const double a = T - absolute_zero, b = ambient - absolute_zero;
    q += emissivity * stefan_boltzmann * (a * a * a * a - b * b * b * b);
  }
  return q;
}

double ThermalBC::flux_derivative(double T) const {
  double d = 0.0;
  if (kind == ThermalBCKind::Convection || kind == ThermalBCKind::Combined) d += film;
  if (kind == ThermalBCKind::Radiation || kind == ThermalBCKind::Combined) {
    const double a = T - absolute_zero;
    d += 4.0 * emissivity * stefan_boltzmann * a * a * a;
  }
  return d;
}

double HeatStepReport::balance_error() const {
  const double scale = std::max({std::abs(content_change), std::abs(boundary_loss), std::abs(injected), 1e-300});
  return (content_change + boundary_loss - injected) / scale;
}

ThermalModel::ThermalModel(const Mesh& mesh, const MeshGeometry& geometry, const MaterialSet& materials)
    : mesh_(&mesh), geometry_(&geometry), materials_(&materials), ops_(geometry) {
  for (Region r : kAllRegions) enthalpy_[static_cast<int>(r)] = EnthalpyTable(materials[r]);
}

double ThermalModel::heat_content(const FieldState& state, const std::vector<char>& elements) const {
  double sum = 0.0;
  for (Index e = 0; e < mesh_->num_elements(); ++e) {
    if (!elements[e]) continue;
    const auto conn = mesh_->element(e);
    const auto m = ops_.lumped(e);
    const auto& h = enthalpy(mesh_->regions[e]);
    for (std::size_t a = 0; a < conn.size(); ++a) sum += m(a) * h(state.temperature(conn[a]));
  }
  return sum;
}

double ThermalModel::heat_content(const FieldState& state) const { return heat_content(state, state.active); }

namespace {

/// Lumped edge weights: integral of each edge shape function (with 2 pi r).
std::vector<std::pair<int, double>> edge_weights(const Mesh& mesh, const BoundaryEdge& edge) {
  const auto ids = edge_node_indices(mesh, edge);
  std::vector<std::pair<int, double>> out;
  for (int id : ids) out.emplace_back(id, 0.0);
  for (const auto& p : edge_quadrature(mesh, edge))
    for (std::size_t a = 0; a < ids.size(); ++a) out[a].second += p.shape(static_cast<Index>(a)) * p.measure;
  return out;
}

}  // namespace

HeatStepReport ThermalModel::step(FieldState& state, const std::vector<ThermalBC>& bcs, double dt, double theta,
                                  double tolerance) const {
  if (!(dt > 0.0)) throw std::invalid_argument("heat step: dt must be positive");
  const Mesh& mesh = *mesh_;
  const Index nn = mesh.num_nodes();
  const int npe = mesh.nodes_per_element();
  const auto act_nodes = active_nodes(mesh, state.active);

  std::vector<char> constrained(nn, 0);
  Eigen::VectorXd x = state.temperature;
  for (const auto& bc : bcs) {
    if (bc.kind != ThermalBCKind::Prescribed) continue;
    for (std::size_t i = 0; i < bc.nodes.size(); ++i) {
      constrained[bc.nodes[i]] = 1;
      x(bc.nodes[i]) = bc.values[i];
    }
  }
  fem::DofMap dofs(nn, 1, act_nodes, constrained);
  fem::SparseSystem sys(mesh, state.active, dofs);
  fem::LinearSolver solver(fem::LinearSolver::Kind::GeneralLU);

  // Exchange surfaces, lumped to nodes.
  struct Lump {
    int node;
    double w;
    const ThermalBC* bc;
  };
  std::vector<Lump> lumps;
  for (const auto& bc : bcs) {
    if (bc.kind == ThermalBCKind::Prescribed) continue;
    for (const auto& edge : bc.edges)
      for (const auto& [n, w] : edge_weights(mesh, edge)) lumps.push_back({n, w, &bc});
  }

  const Eigen::VectorXd Tn = state.temperature;
  // Explicit part of the flux for theta < 1.
  Eigen::VectorXd fn = Eigen::VectorXd::Zero(nn);
  double boundary_n = 0.0;
  if (theta < 1.0) {
    Eigen::VectorXd te(npe);
    for (Index e = 0; e < mesh.num_elements(); ++e) {
      if (!state.active[e]) continue;
      const auto conn = mesh.element(e);
      for (int a = 0; a < npe; ++a) te(a) = Tn(conn[a]);
      const double k = (*materials_)[mesh.regions[e]].conductivity(te.mean());
      const Eigen::VectorXd f = k * (ops_.stiffness(e) * te);
      for (int a = 0; a < npe; ++a) fn(conn[a]) += f(a);
    }
    for (const auto& l : lumps) {
      const double q = l.w * l.bc->flux(Tn(l.node));
      fn(l.node) += q;
      boundary_n += q;
    }
  }

  Eigen::VectorXd ref(dofs.num_equations());
  ref.setZero();
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (!state.active[e]) continue;
    const auto conn = mesh.element(e);
    const auto m = ops_.lumped(e);
    const auto& h = enthalpy(mesh.regions[e]);
    for (int a = 0; a < npe; ++a) {
      const int eq = dofs.equation(conn[a]);
      if (eq >= 0) ref(eq) += m(a) * h.capacity(Tn(conn[a])) / dt;
    }
  }

  Eigen::MatrixXd ke(npe, npe);
  Eigen::VectorXd re(npe), te(npe);
  auto residual = [&](const Eigen::VectorXd& T, Eigen::VectorXd& r) {
    sys.zero();
    for (Index e = 0; e < mesh.num_elements(); ++e) {
      if (!state.active[e]) continue;
      const auto conn = mesh.element(e);
      const auto& mat = (*materials_)[mesh.regions[e]];
      const auto& h = enthalpy(mesh.regions[e]);
      const auto m = ops_.lumped(e);
      const auto k0 = ops_.stiffness(e);
      for (int a = 0; a < npe; ++a) te(a) = T(conn[a]);
      const double tbar = te.mean();
      const double k = mat.conductivity(tbar);
      const double dk = mat.conductivity.slope(tbar);
      const Eigen::VectorXd flux = k0 * te;
      re = theta * k * flux;
      ke = theta * k * k0;
      ke.colwise() += theta * dk / npe * flux;
      for (int a = 0; a < npe; ++a) {
        re(a) += m(a) * (h(te(a)) - h(Tn(conn[a]))) / dt;
        ke(a, a) += m(a) * h.capacity(te(a)) / dt;
      }
      fem::check_finite(e, ke, re);
      sys.add(e, ke, re);
    }
    for (const auto& l : lumps) sys.add_diagonal(l.node, theta * l.w * l.bc->flux_derivative(T(l.node)), theta * l.w * l.bc->flux(T(l.node)));
    if (theta < 1.0) sys.residual() += (1.0 - theta) * fn;
    r = sys.residual();
    return dofs.restrict(r).norm();
  };
  auto step_fn = [&](const Eigen::VectorXd&, const Eigen::VectorXd& r, Eigen::VectorXd& dx) {
    solver.factorize(sys.matrix());
    dx = dofs.expand(solver.solve(-dofs.restrict(r)));
  };
  fem::NewtonOptions opt;
  opt.tolerance = tolerance;
  opt.reference = ref.norm();
  opt.max_iterations = 20;

  HeatStepReport rep;
  const auto nr = fem::newton(residual, step_fn, x, opt);
  rep.converged = nr.converged;
  rep.iterations = nr.iterations;
  if (!nr.converged) return rep;

  // Energy bookkeeping on the converged state.
  Eigen::VectorXd r;
  residual(x, r);
  FieldState trial = state;
  trial.temperature = x;
  rep.content_change = heat_content(trial) - heat_content(state);
  double boundary = 0.0;
  for (const auto& l : lumps) boundary += l.w * l.bc->flux(x(l.node));
  rep.boundary_loss = dt * (theta * boundary + (1.0 - theta) * boundary_n);
  double injected = 0.0;
  for (Index n = 0; n < nn; ++n)
    if (constrained[n] && act_nodes[n]) injected += r(n);
  rep.injected = dt * injected;
  for (Index n = 0; n < nn; ++n)
    if (act_nodes[n]) rep.max_change = std::max(rep.max_change, std::abs(x(n) - Tn(n)));
  state.temperature = x;
  state.time += dt;
  return rep;
}

HeatStepReport solve_heat_step(const ThermalModel& model, FieldState& state, const std::vector<ThermalBC>& bcs,
                               double dt, double theta) {
  return model.step(state, bcs, dt, theta);
}

std::vector<BoundaryEdge> exchange_edges(const Mesh& mesh, const std::vector<char>& active) {
  std::vector<char> lateral(mesh.num_nodes(), 0);
  for (const char* name : {"left_edge", "right_edge"})
    if (mesh.has_node_set(name))
      for (int n : mesh.node_set(name)) lateral[n] = 1;
  std::vector<BoundaryEdge> out;
  for (const auto& edge : free_edges(mesh, active)) {
    const auto ids = edge_node_indices(mesh, edge);
    bool all_lateral = true;
    for (int id : ids) all_lateral = all_lateral && lateral[id];
    if (!all_lateral) out.push_back(edge);
  }
  return out;
}

namespace {

struct Stepper {
  const ThermalModel& model;
  const TorchSchedule& sch;
  const SurfaceExchange& exch;
  TorchResult& result;
  const TorchObserver& observer;
  double dt;
  int bead = 0;

  void record(const FieldState& s) {
    const Mesh& mesh = model.mesh();
    const auto act = active_nodes(mesh, s.active);
    for (Index n = 0; n < mesh.num_nodes(); ++n)
      if (act[n]) result.peak_temperature(n) = std::max(result.peak_temperature(n), s.temperature(n));
    result.times.push_back(s.time);
    for (std::size_t p = 0; p < result.probes.size(); ++p) {
      const double T = s.temperature(result.probes[p].node);
      result.probe_series[p].push_back(T);
      if (bead > 0) {
        auto& peak = result.probes[p].pass_peak;
        peak[bead - 1] = std::max(peak[bead - 1], T);
      }
    }
  }

  std::vector<ThermalBC> loads(const FieldState& s, const std::vector<int>& fixed, const std::vector<double>& values) {
    std::vector<ThermalBC> bcs;
    if (exch.enabled) {
      ThermalBC bc;
      bc.kind = ThermalBCKind::Combined;
      bc.edges = exchange_edges(model.mesh(), s.active);
      bc.film = exch.film;
      bc.emissivity = exch.emissivity;
      bc.ambient = exch.ambient;
      bcs.push_back(std::move(bc));
    }
    if (!fixed.empty()) {
      ThermalBC bc;
      bc.kind = ThermalBCKind::Prescribed;
      bc.nodes = fixed;
      bc.values = values;
      bcs.push_back(std::move(bc));
    }
    return bcs;
  }

  /// Advance to t_end (or until `stop` holds after a step), with adaptive dt.
  /// `prescribe(t)` returns nodal values of the fixed set at time t.
  template <typename Prescribe, typename Stop>
  void advance(FieldState& s, double t_end, const std::vector<int>& fixed, Prescribe&& prescribe, Stop&& stop) {
    int halvings = 0;
    while (true) {
      if (stop(s)) return;
      if (t_end - s.time <= 1e-12 * std::max(1.0, t_end)) return;
      double h = std::min(dt, t_end - s.time);
      const auto bcs = loads(s, fixed, prescribe(s.time + h));
      FieldState trial = s;
      const auto rep = model.step(trial, bcs, h);
      if (!rep.converged || rep.max_change > 2.0 * sch.target_change) {
        ++result.rejected;
        if (h <= sch.dt_min * (1.0 + 1e-12) || ++halvings > sch.max_halvings) {
          if (!rep.converged) {
            std::ostringstream os;
            os << "thermal step failed at t = " << s.time << " s (bead " << bead << ", dt = " << h << ")";
            throw FatalError(os.str());
          }
          // Large change at the minimum step: accept, the load itself is abrupt.
        } else {
          dt = std::max(0.5 * h, sch.dt_min);
          continue;
        }
      }
      halvings = 0;
      s = std::move(trial);
      ++result.steps;
      record(s);
      if (observer) observer(TorchEvent::Step, bead, s);
      const double grow = rep.max_change > 0.0 ? sch.target_change / rep.max_change : 2.0;
      dt = std::clamp(h * std::clamp(grow, 0.5, 2.0), sch.dt_min, sch.dt_max);
    }
  }
};

}  // namespace

TorchResult run_torch_protocol(const ThermalModel& model, FieldState& state, const TorchSchedule& sch,
                               const SurfaceExchange& exch, const std::vector<Vec2>& probes,
                               const TorchObserver& observer) {
  const Mesh& mesh = model.mesh();
  if (mesh.n_beads < 1) throw std::invalid_argument("torch protocol: mesh has no bead sets");
  if (!(sch.interpass_temperature > sch.final_temperature))
    throw std::invalid_argument("torch protocol: inter-pass temperature must exceed the final temperature");
  TorchResult result;
  result.peak_temperature = state.temperature;
  {
    const auto act = active_nodes(mesh, state.active);
    for (Index n = 0; n < mesh.num_nodes(); ++n)
      if (!act[n]) result.peak_temperature(n) = -std::numeric_limits<double>::infinity();
  }
  for (const auto& p : probes) {
    TorchProbe tp;
    tp.position = p;
    tp.node = nearest_node(mesh, p);
    tp.pass_peak.assign(mesh.n_beads, -std::numeric_limits<double>::infinity());
    result.probes.push_back(tp);
  }
  result.probe_series.resize(probes.size());
  Stepper st{model, sch, exch, result, observer, sch.dt_initial};
  const auto never = [](const FieldState&) { return false; };
  const std::vector<double> none;

  for (int k = 1; k <= mesh.n_beads; ++k) {
    st.bead = k;
    const auto& cavity = mesh.node_set("cavity_edge_bead_" + std::to_string(k));
    std::vector<double> start;
    for (int n : cavity) start.push_back(state.temperature(n));

    // Apply: linear ramp of every cavity node to the melting temperature.
    const double t0 = state.time;
    auto ramp = [&](double t) {
      const double s = std::clamp((t - t0) / sch.apply_duration, 0.0, 1.0);
      std::vector<double> v(start.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = start[i] + s * (sch.melt_temperature - start[i]);
      return v;
    };
    st.dt = std::min(sch.dt_initial, sch.apply_duration / 10.0);
    st.advance(state, t0 + sch.apply_duration, cavity, ramp, never);
    if (observer) observer(TorchEvent::ApplyEnd, k, state);

    // Hold.
    const std::vector<double> melt(cavity.size(), sch.melt_temperature);
    st.advance(state, state.time + sch.hold_duration, cavity, [&](double) { return melt; }, never);
    if (observer) observer(TorchEvent::HoldEnd, k, state);

    // Pause: deposit the bead at the melting temperature.
    state = activate_bead(mesh, std::move(state), k, sch.melt_temperature);
    st.record(state);
    if (observer) observer(TorchEvent::Activated, k, state);
    {
      const auto bcs = st.loads(state, {}, none);
      const auto rep = model.step(state, bcs, sch.pause_duration);
      if (!rep.converged) throw FatalError("thermal step failed during the pause of bead " + std::to_string(k));
      st.record(state);
      if (observer) observer(TorchEvent::Step, k, state);
    }

    // Cool-down, controlled by the sensor node at the bead centroid.
    Vec2 centroid = Vec2::Zero();
    for (int e : mesh.bead(k)) centroid += mesh.element_centroid(e);
    centroid /= static_cast<double>(mesh.bead(k).size());
    const auto act = active_nodes(mesh, state.active);
    const int sensor = nearest_node(mesh, centroid, &act);
    result.sensor_nodes.push_back(sensor);
    const bool last = k == mesh.n_beads;
    auto done = [&](const FieldState& s) {
      if (!last) return s.temperature(sensor) <= sch.interpass_temperature;
      if (sch.final_uniform) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (Index n = 0; n < mesh.num_nodes(); ++n)
          if (act[n]) {
            lo = std::min(lo, s.temperature(n));
            hi = std::max(hi, s.temperature(n));
          }
        return hi - lo <= sch.final_tolerance;
      }
      return s.temperature(sensor) <= sch.final_temperature + sch.final_tolerance;
    };
    const double cap = state.time + sch.cooldown_cap;
    st.dt = sch.dt_min * 10.0;
    st.advance(state, cap, {}, [&](double) { return none; }, done);
    if (!done(state)) {
      std::ostringstream os;
      os << "cool-down of bead " << k << " did not reach its target within " << sch.cooldown_cap
         << " s (sensor node " << sensor << " at " << state.temperature(sensor) << " degC)";
      throw FatalError(os.str());
    }
    result.pass_end_times.push_back(state.time);
    if (observer) observer(TorchEvent::PassEnd, k, state);
  }
  return result;
}

}  // namespace hydroweld
