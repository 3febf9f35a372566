#include "hydroweld/hydrogen/transport.hpp"

#include "hydroweld/fem/newton.hpp"
#include "hydroweld/fem/projection.hpp"
#include "hydroweld/fem/sparse_system.hpp"

#include <algorithm>
#include <cmath>

namespace hydroweld {

TransportModel::TransportModel(const Mesh& mesh, const MeshGeometry& geometry, const MaterialSet& materials,
                               TransportOptions options)
    : mesh_(&mesh),
      geometry_(&geometry),
      materials_(&materials),
      options_(options),
      npe_(mesh.nodes_per_element()),
      nq_(geometry.points_per_element()) {
  lumped_.assign(static_cast<std::size_t>(mesh.num_elements()) * npe_, 0.0);
  for (Index e = 0; e < mesh.num_elements(); ++e)
    for (int q = 0; q < nq_; ++q)
      for (int a = 0; a < npe_; ++a) lumped_[e * npe_ + a] += geometry.shape(q)(a) * geometry.measure(e, q);
  for (int i = 0; i < kTrapKinds; ++i)
    if (materials.traps[i].evolving) dislocation_index_ = i;
}

std::array<double, kTrapKinds> TransportModel::element_densities(Index e, const std::vector<double>& dis) const {
  auto n = (*materials_)[mesh_->regions[e]].trap_density;
  if (!options_.traps) {
    n.fill(0.0);
    return n;
  }
  double sum = 0.0;
  for (int q = 0; q < nq_; ++q) sum += dis[e * nq_ + q];
  n[dislocation_index_] = sum / nq_;
  return n;
}

std::array<double, kTrapKinds> TransportModel::element_densities(Index e, const std::vector<PointHistory>& pts) const {
  std::vector<double> dis(static_cast<std::size_t>(nq_));
  auto n = (*materials_)[mesh_->regions[e]].trap_density;
  if (!options_.traps) {
    n.fill(0.0);
    return n;
  }
  double sum = 0.0;
  for (int q = 0; q < nq_; ++q) {
    const double v = pts[e * nq_ + q].trap_density;
    sum += v > 0.0 ? v : n[dislocation_index_];
  }
  n[dislocation_index_] = sum / nq_;
  return n;
}

std::vector<double> TransportModel::dislocation_densities(const FieldState& state) const {
  std::vector<double> out(state.points.size());
  for (Index e = 0; e < mesh_->num_elements(); ++e) {
    const double n0 = (*materials_)[mesh_->regions[e]].trap_density[dislocation_index_];
    for (int q = 0; q < nq_; ++q) {
      const double v = state.points[e * nq_ + q].trap_density;
      out[e * nq_ + q] = v > 0.0 ? v : n0;
    }
  }
  return out;
}

void TransportModel::update_trap_densities(FieldState& state) const {
  for (Index e = 0; e < mesh_->num_elements(); ++e) {
    const double n0 = (*materials_)[mesh_->regions[e]].trap_density[dislocation_index_];
    for (int q = 0; q < nq_; ++q) {
      auto& p = state.points[e * nq_ + q];
      p.trap_density = std::max(p.trap_density, trap_density_evolution(n0, p.eq_plastic_strain).density);
    }
  }
}

double TransportModel::lattice_content(const Eigen::VectorXd& c, const std::vector<char>& active) const {
  double sum = 0.0;
  for (Index e = 0; e < mesh_->num_elements(); ++e) {
    if (!active[e]) continue;
    const auto conn = mesh_->element(e);
    for (int a = 0; a < npe_; ++a) sum += lumped_[e * npe_ + a] * c(conn[a]);
  }
  return sum;
}

double TransportModel::total_content(const Eigen::VectorXd& c, const std::vector<double>& dis,
                                     const std::vector<char>& active) const {
  double sum = 0.0;
  for (Index e = 0; e < mesh_->num_elements(); ++e) {
    if (!active[e]) continue;
    const auto& mat = (*materials_)[mesh_->regions[e]];
    const auto n = element_densities(e, dis);
    const auto conn = mesh_->element(e);
    for (int a = 0; a < npe_; ++a) {
      const double cl = c(conn[a]);
      const auto eq = trap_equilibrium(cl, n, materials_->traps, mat.lattice_sites, options_.temperature);
      sum += lumped_[e * npe_ + a] * (cl + eq.total_trapped);
    }
  }
  return sum;
}

double TransportModel::total_content(const FieldState& state) const {
  return total_content(state.lattice_hydrogen, dislocation_densities(state), state.active);
}

std::vector<TrapEquilibrium> TransportModel::point_trapping(const FieldState& state) const {
  std::vector<TrapEquilibrium> out(state.points.size());
  for (Index e = 0; e < mesh_->num_elements(); ++e) {
    const auto& mat = (*materials_)[mesh_->regions[e]];
    auto n = mat.trap_density;
    for (int q = 0; q < nq_; ++q) {
      const auto& p = state.points[e * nq_ + q];
      n[dislocation_index_] = p.trap_density > 0.0 ? p.trap_density : mat.trap_density[dislocation_index_];
      if (!options_.traps) n.fill(0.0);
      const double c = fem::interpolate(*geometry_, state.lattice_hydrogen, e, q);
      out[e * nq_ + q] = trap_equilibrium(c, n, materials_->traps, mat.lattice_sites, options_.temperature);
    }
  }
  return out;
}

TransportReport TransportModel::step(FieldState& state, const Eigen::VectorXd& sh, const std::vector<double>& dis_old,
                                     double dt, const ConcentrationBC& bcs) const {
  if (!(dt > 0.0)) throw std::invalid_argument("transport step: dt must be positive");
  const Mesh& mesh = *mesh_;
  const Index nn = mesh.num_nodes();
  const auto act = active_nodes(mesh, state.active);
  std::vector<char> constrained(nn, 0);
  Eigen::VectorXd x = state.lattice_hydrogen;
  for (std::size_t i = 0; i < bcs.nodes.size(); ++i) {
    constrained[bcs.nodes[i]] = 1;
    x(bcs.nodes[i]) = bcs.values[i];
  }
  fem::DofMap dofs(nn, 1, act, constrained);
  fem::SparseSystem sys(mesh, state.active, dofs);
  fem::LinearSolver solver(fem::LinearSolver::Kind::GeneralLU);
  const auto dis_new = dislocation_densities(state);
  const Eigen::VectorXd cn = state.lattice_hydrogen;
  const double drift_factor = options_.drift ? 1e-3 / (constants::gas_constant * options_.temperature) : 0.0;

  // Element transport operators are independent of C_L: build once.
  std::vector<double> ops(static_cast<std::size_t>(mesh.num_elements()) * npe_ * npe_, 0.0);
  std::vector<std::array<double, kTrapKinds>> n_old(mesh.num_elements()), n_new(mesh.num_elements());
  Eigen::MatrixXd ke(npe_, npe_);
  Eigen::VectorXd se(npe_);
  double ref = 0.0;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (!state.active[e]) continue;
    const auto& mat = (*materials_)[mesh.regions[e]];
    const auto conn = mesh.element(e);
    for (int a = 0; a < npe_; ++a) se(a) = sh(conn[a]);
    ke.setZero();
    for (int q = 0; q < nq_; ++q) {
      const auto g = geometry_->gradients(e, q);
      const double dv = geometry_->measure(e, q);
      const double phi = fem::interpolate(*geometry_, state.phase_field, e, q);
      const double d = crack_enhanced_DL(mat.lattice_diffusivity, phi, options_.crack_enhancement,
                                         options_.crack_threshold);
      ke.noalias() += d * dv * g.transpose() * g;
      if (drift_factor != 0.0) {
        const Vec2 grad_sh = g * se;
        const Eigen::VectorXd adv = g.transpose() * grad_sh;  // grad N_a . grad sigma_H
        ke.noalias() -= d * mat.molar_volume * drift_factor * dv * adv * geometry_->shape(q).transpose();
      }
    }
    fem::discrete_upwind(ke);
    Eigen::Map<Eigen::MatrixXd>(ops.data() + static_cast<std::size_t>(e) * npe_ * npe_, npe_, npe_) = ke;
    n_old[e] = element_densities(e, dis_old);
    n_new[e] = element_densities(e, dis_new);
    for (int a = 0; a < npe_; ++a) ref = std::max(ref, lumped_[e * npe_ + a] / dt);
  }

  Eigen::VectorXd te(npe_), re(npe_);
  auto residual = [&](const Eigen::VectorXd& c, Eigen::VectorXd& r) {
    sys.zero();
    for (Index e = 0; e < mesh.num_elements(); ++e) {
      if (!state.active[e]) continue;
      const auto& mat = (*materials_)[mesh.regions[e]];
      const auto conn = mesh.element(e);
      const Eigen::Map<const Eigen::MatrixXd> k(ops.data() + static_cast<std::size_t>(e) * npe_ * npe_, npe_, npe_);
      for (int a = 0; a < npe_; ++a) te(a) = c(conn[a]);
      re = k * te;
      ke = k;
      for (int a = 0; a < npe_; ++a) {
        const double m = lumped_[e * npe_ + a] / dt;
        const auto now = trap_equilibrium(te(a), n_new[e], materials_->traps, mat.lattice_sites, options_.temperature);
        const auto old =
            trap_equilibrium(cn(conn[a]), n_old[e], materials_->traps, mat.lattice_sites, options_.temperature);
        re(a) += m * (te(a) + now.total_trapped - cn(conn[a]) - old.total_trapped);
        ke(a, a) += m * (1.0 + now.dtrapped_dCL);
      }
      fem::check_finite(e, ke, re);
      sys.add(e, ke, re);
    }
    r = sys.residual();
    return dofs.restrict(r).norm();
  };
  auto step_fn = [&](const Eigen::VectorXd&, const Eigen::VectorXd& r, Eigen::VectorXd& dx) {
    solver.factorize(sys.matrix());
    dx = dofs.expand(solver.solve(-dofs.restrict(r)));
  };
  double cmax = std::max(x.maxCoeff(), 0.0);
  for (double v : bcs.values) cmax = std::max(cmax, v);
  fem::NewtonOptions opt;
  opt.tolerance = options_.tolerance;
  // Residual scale: storage rate of the peak concentration in the largest node.
  opt.reference = ref * std::max(cmax, 1e-30);
  opt.max_iterations = options_.max_iterations;

  TransportReport rep;
  const auto nr = fem::newton(residual, step_fn, x, opt);
  rep.converged = nr.converged;
  rep.iterations = nr.iterations;
  if (!nr.converged) return rep;
  Eigen::VectorXd r;
  residual(x, r);
  double cmin = 0.0, cpeak = 0.0;
  for (Index n = 0; n < nn; ++n)
    if (act[n]) {
      cmin = std::min(cmin, x(n));
      cpeak = std::max(cpeak, x(n));
    }
  rep.min_concentration = cmin;
  if (cmin < -options_.negativity_tolerance * std::max(cpeak, 1e-300)) {
    rep.converged = false;
    return rep;
  }
  rep.content_before = total_content(cn, dis_old, state.active);
  rep.lattice_before = lattice_content(cn, state.active);
  for (Index n = 0; n < nn; ++n)
    if (act[n] && x(n) < 0.0) x(n) = 0.0;
  rep.content_after = total_content(x, dis_new, state.active);
  rep.lattice_after = lattice_content(x, state.active);
  for (std::size_t i = 0; i < bcs.nodes.size(); ++i) {
    rep.nodal_supply.push_back(r(bcs.nodes[i]));
    rep.inflow += dt * r(bcs.nodes[i]);
  }
  state.lattice_hydrogen = x;
  return rep;
}

TransportReport solve_transport_step(const TransportModel& model, FieldState& state, const Eigen::VectorXd& sh,
                                     const std::vector<double>& dis_old, double dt, const ConcentrationBC& bcs) {
  return model.step(state, sh, dis_old, dt, bcs);
}

}  // namespace hydroweld
