#include "hydroweld/fracture/phase_field.hpp"

#include "hydroweld/fem/projection.hpp"
#include "hydroweld/fem/sparse_system.hpp"

#include <algorithm>
#include <cmath>

namespace hydroweld {

PhaseFieldModel::PhaseFieldModel(const Mesh& mesh, const MeshGeometry& geometry, const MaterialSet& materials)
    : mesh_(&mesh), geometry_(&geometry), materials_(&materials), ops_(geometry, true) {
  for (Region r : kAllRegions) length_[static_cast<int>(r)] = hydroweld::length_scale(materials[r]);
}

std::pair<double, double> PhaseFieldModel::point_properties(Index e, double c) const {
  const auto& mat = (*materials_)[mesh_->regions[e]];
  const double gc = gc_of_hydrogen(mat, std::max(c, 0.0));
  const double l = materials_->field_dependent_length_scale ? hydroweld::length_scale(mat, gc)
                                                            : length_[static_cast<int>(mesh_->regions[e])];
  return {gc, l};
}

double PhaseFieldModel::broken_history(Region r) const {
  const auto& mat = (*materials_)[r];
  return 1e6 * mat.toughness / length_[static_cast<int>(r)];
}

PhaseFieldReport PhaseFieldModel::solve(Eigen::VectorXd& phi, const Eigen::VectorXd& previous,
                                        const std::vector<double>& history, const Eigen::VectorXd& c,
                                        const std::vector<char>& active) const {
  const Mesh& mesh = *mesh_;
  const Index nn = mesh.num_nodes();
  const int npe = mesh.nodes_per_element(), nq = geometry_->points_per_element();
  const auto act = active_nodes(mesh, active);
  fem::DofMap dofs(nn, 1, act, std::vector<char>(nn, 0));
  fem::SparseSystem sys(mesh, active, dofs);
  sys.zero();
  Eigen::MatrixXd ke(npe, npe);
  Eigen::VectorXd re(npe);
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (!active[e]) continue;
    double coeff = 0.0, volume = 0.0;
    ke.setZero();
    re.setZero();
    for (int q = 0; q < nq; ++q) {
      const double dv = geometry_->measure(e, q);
      const auto [gc, l] = point_properties(e, fem::interpolate(*geometry_, c, e, q));
      const double h = history[e * nq + q];
      if (!(h >= 0.0)) throw FatalError("phase field: negative or NaN history at element " + std::to_string(e));
      coeff += gc * l * dv;
      volume += dv;
      const auto n = geometry_->shape(q);
      for (int a = 0; a < npe; ++a) {
        ke(a, a) += n(a) * dv * (gc / l + 2.0 * h);
        re(a) -= n(a) * dv * 2.0 * h;
      }
    }
    ke += (coeff / volume) * ops_.stiffness(e);
    fem::check_finite(e, ke, re);
    sys.add(e, ke, re);
  }
  fem::LinearSolver solver(fem::LinearSolver::Kind::SymmetricLDLT);
  solver.factorize(sys.matrix());
  const Eigen::VectorXd x = solver.solve(-sys.reduced_residual());
  const Eigen::VectorXd full = dofs.expand(x);

  PhaseFieldReport rep;
  phi = previous;
  for (Index n = 0; n < nn; ++n) {
    if (!act[n]) continue;
    const double raw = full(n);
    rep.bound_violation = std::max({rep.bound_violation, -raw, raw - 1.0});
    rep.irreversibility_violation = std::max(rep.irreversibility_violation, previous(n) - raw);
    phi(n) = std::clamp(std::max(raw, previous(n)), 0.0, 1.0);
    rep.max_phi = std::max(rep.max_phi, phi(n));
  }
  return rep;
}

PhaseFieldReport PhaseFieldModel::solve(FieldState& state, const Eigen::VectorXd& previous) const {
  std::vector<double> h(state.points.size());
  for (std::size_t p = 0; p < h.size(); ++p) h[p] = state.points[p].history;
  Eigen::VectorXd phi;
  const auto rep = solve(phi, previous, h, state.lattice_hydrogen, state.active);
  state.phase_field = phi;
  return rep;
}

double PhaseFieldModel::crack_energy(const FieldState& state) const {
  const Mesh& mesh = *mesh_;
  const int npe = mesh.nodes_per_element(), nq = geometry_->points_per_element();
  Eigen::VectorXd pe(npe);
  double sum = 0.0;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (!state.active[e]) continue;
    const auto conn = mesh.element(e);
    for (int a = 0; a < npe; ++a) pe(a) = state.phase_field(conn[a]);
    for (int q = 0; q < nq; ++q) {
      const double phi = geometry_->shape(q).dot(pe);
      const Vec2 grad = geometry_->gradients(e, q) * pe;
      const auto [gc, l] = point_properties(e, fem::interpolate(*geometry_, state.lattice_hydrogen, e, q));
      sum += gc * (phi * phi / (2.0 * l) + 0.5 * l * grad.squaredNorm()) * geometry_->measure(e, q);
    }
  }
  return sum;
}

Eigen::VectorXd solve_phasefield_step(const PhaseFieldModel& model, const FieldState& state,
                                      const std::vector<double>& history, const Eigen::VectorXd& c,
                                      PhaseFieldReport* report) {
  Eigen::VectorXd phi;
  const auto rep = model.solve(phi, state.phase_field, history, c, state.active);
  if (report) *report = rep;
  return phi;
}

}  // namespace hydroweld
