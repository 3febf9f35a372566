#include "hydroweld/mechanics/mechanics.hpp"

#include "hydroweld/fem/newton.hpp"
#include "hydroweld/fem/projection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hydroweld {

namespace {

using BMatrix = Eigen::Matrix<double, 4, Eigen::Dynamic>;

void element_b(const MeshGeometry& g, Index e, bool bbar, std::vector<BMatrix>& out) {
  const Mesh& mesh = g.mesh();
  const int npe = mesh.nodes_per_element(), nq = g.points_per_element();
  const double s2 = 1.0 / std::sqrt(2.0);
  out.resize(nq);
  Eigen::RowVectorXd vol_mean = Eigen::RowVectorXd::Zero(2 * npe);
  double volume = 0.0;
  for (int q = 0; q < nq; ++q) {
    BMatrix& b = out[q];
    b.setZero(4, 2 * npe);
    const auto grad = g.gradients(e, q);
    const auto n = g.shape(q);
    const double r = g.position(e, q).x();
    for (int a = 0; a < npe; ++a) {
      b(0, 2 * a) = grad(0, a);
      b(1, 2 * a + 1) = grad(1, a);
      if (mesh.axisymmetric()) b(2, 2 * a) = n(a) / r;
      b(3, 2 * a) = s2 * grad(1, a);
      b(3, 2 * a + 1) = s2 * grad(0, a);
    }
    if (bbar) {
      const double dv = g.measure(e, q);
      vol_mean += dv * (b.row(0) + b.row(1) + b.row(2));
      volume += dv;
    }
  }
  if (!bbar) return;
  vol_mean /= volume;
  for (int q = 0; q < nq; ++q) {
    BMatrix& b = out[q];
    const Eigen::RowVectorXd corr = (vol_mean - (b.row(0) + b.row(1) + b.row(2))) / 3.0;
    for (int i = 0; i < 3; ++i) b.row(i) += corr;
  }
}

}  // namespace

MechanicsModel::MechanicsModel(const Mesh& mesh, const MeshGeometry& geometry, const MaterialSet& materials,
                               MechanicsOptions options)
    : mesh_(&mesh),
      geometry_(&geometry),
      materials_(&materials),
      options_(options),
      npe_(mesh.nodes_per_element()),
      nq_(geometry.points_per_element()) {}

Eigen::Matrix<double, 4, Eigen::Dynamic> MechanicsModel::strain_matrix(Index e, int q) const {
  std::vector<BMatrix> b;
  element_b(*geometry_, e, options_.bbar, b);
  return b[q];
}

Mandel MechanicsModel::strain(const Eigen::VectorXd& u, Index e, int q) const {
  const auto b = strain_matrix(e, q);
  const auto conn = mesh_->element(e);
  Eigen::VectorXd ue(2 * npe_);
  for (int a = 0; a < npe_; ++a) ue.segment<2>(2 * a) = u.segment<2>(2 * static_cast<Index>(conn[a]));
  return b * ue;
}

MechanicsReport MechanicsModel::solve(FieldState& state, const Eigen::VectorXd& T, const DisplacementBC& bcs) const {
  const Mesh& mesh = *mesh_;
  const Index nn = mesh.num_nodes();
  const auto act = active_nodes(mesh, state.active);
  std::vector<char> constrained(2 * nn, 0);
  Eigen::VectorXd u = state.displacement;
  for (std::size_t i = 0; i < bcs.dofs.size(); ++i) {
    constrained[bcs.dofs[i]] = 1;
    u(bcs.dofs[i]) = bcs.values[i];
  }
  fem::DofMap dofs(nn, 2, act, constrained);
  fem::SparseSystem sys(mesh, state.active, dofs);
  fem::LinearSolver solver(fem::LinearSolver::Kind::SymmetricLDLT);

  // Strain-free insertion: points activated since the last solve take the
  // current configuration at the new temperature as their reference.
  std::vector<PointHistory> committed = state.points;
  std::vector<BMatrix> bs;
  Eigen::VectorXd ue(2 * npe_);
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (!state.active[e]) continue;
    bool pending = false;
    for (int q = 0; q < nq_; ++q) pending = pending || committed[e * nq_ + q].pending_offset;
    if (!pending) continue;
    element_b(*geometry_, e, options_.bbar, bs);
    const auto conn = mesh.element(e);
    for (int a = 0; a < npe_; ++a) ue.segment<2>(2 * a) = state.displacement.segment<2>(2 * static_cast<Index>(conn[a]));
    const auto& mat = (*materials_)[mesh.regions[e]];
    for (int q = 0; q < nq_; ++q) {
      auto& p = committed[e * nq_ + q];
      if (!p.pending_offset) continue;
      const double Tq = fem::interpolate(*geometry_, T, e, q);
      p.strain_offset = bs[q] * ue - thermal_strain(mat, Tq, options_.constitutive.reference_temperature);
      p.pending_offset = false;
    }
  }

  std::vector<PointHistory> trial(committed.size());
  const int nd = 2 * npe_;
  Eigen::MatrixXd ke(nd, nd);
  Eigen::VectorXd re(nd);
  double reference = 0.0;
  bool reference_set = false;
  auto residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) -> double {
    sys.zero();
    for (Index e = 0; e < mesh.num_elements(); ++e) {
      if (!state.active[e]) continue;
      element_b(*geometry_, e, options_.bbar, bs);
      const auto conn = mesh.element(e);
      for (int a = 0; a < npe_; ++a) ue.segment<2>(2 * a) = x.segment<2>(2 * static_cast<Index>(conn[a]));
      const auto& mat = (*materials_)[mesh.regions[e]];
      ke.setZero();
      re.setZero();
      for (int q = 0; q < nq_; ++q) {
        const Index p = e * nq_ + q;
        const double Tq = fem::interpolate(*geometry_, T, e, q);
        const double phi = std::clamp(fem::interpolate(*geometry_, state.phase_field, e, q), 0.0, 1.0);
        const Mandel eps = bs[q] * ue;
        const auto upd = stress_update(mat, committed[p], eps, Tq, phi, options_.constitutive);
        trial[p] = upd.history;
        const double dv = geometry_->measure(e, q);
        re.noalias() += dv * bs[q].transpose() * upd.stress;
        ke.noalias() += dv * bs[q].transpose() * upd.tangent * bs[q];
      }
      fem::check_finite(e, ke, re);
      sys.add(e, ke, re);
    }
    r = sys.residual();
    if (!reference_set) {
      reference = r.norm();
      reference_set = true;
    }
    return dofs.restrict(r).norm();
  };
  auto step = [&](const Eigen::VectorXd&, const Eigen::VectorXd& r, Eigen::VectorXd& dx) {
    solver.factorize(sys.matrix());
    dx = dofs.expand(solver.solve(-dofs.restrict(r)));
  };

  // Evaluate once to fix the force scale, then iterate.
  Eigen::VectorXd r0;
  try {
    residual(u, r0);
  } catch (const SolverFailure&) {
    throw;
  }
  fem::NewtonOptions opt;
  opt.tolerance = options_.tolerance;
  opt.reference = reference;
  opt.absolute = options_.absolute_tolerance;
  opt.max_iterations = options_.max_iterations;
  MechanicsReport rep;
  fem::NewtonReport nr;
  try {
    nr = fem::newton(residual, step, u, opt);
  } catch (const FatalError& err) {
    throw SolverFailure(std::string("mechanics: ") + err.what());
  }
  rep.converged = nr.converged;
  rep.iterations = nr.iterations;
  rep.residual = nr.final_norm;
  if (!nr.converged) {
    std::ostringstream os;
    os << "mechanics Newton did not converge (residual " << nr.final_norm << " after " << nr.iterations
       << " iterations)";
    throw SolverFailure(os.str());
  }
  // The last residual evaluation was at the accepted iterate.
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (!state.active[e]) continue;
    for (int q = 0; q < nq_; ++q) state.points[e * nq_ + q] = trial[e * nq_ + q];
  }
  state.displacement = u;
  return rep;
}

MechanicsReport MechanicsModel::advance(FieldState& state, const Eigen::VectorXd& T0, const Eigen::VectorXd& T1,
                                        const DisplacementBC& bc0, const DisplacementBC& bc1) const {
  MechanicsReport total;
  // Stack of remaining fractions [s_from, s_to].
  double s = 0.0, ds = 1.0;
  int cuts = 0;
  while (s < 1.0 - 1e-14) {
    const double s1 = std::min(1.0, s + ds);
    const Eigen::VectorXd T = T0 + s1 * (T1 - T0);
    DisplacementBC bc = bc1;
    for (std::size_t i = 0; i < bc.values.size(); ++i) bc.values[i] = bc0.values[i] + s1 * (bc1.values[i] - bc0.values[i]);
    try {
      const auto rep = solve(state, T, bc);
      total.iterations += rep.iterations;
      total.residual = rep.residual;
      s = s1;
      ds = std::min(2.0 * ds, 1.0 - s);
    } catch (const SolverFailure&) {
      if (++cuts > options_.max_cuts) throw;
      ds *= 0.5;
    }
  }
  total.converged = true;
  total.cuts = cuts;
  return total;
}

Eigen::VectorXd MechanicsModel::internal_force(const FieldState& state) const {
  const Mesh& mesh = *mesh_;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(2 * mesh.num_nodes());
  std::vector<BMatrix> bs;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (!state.active[e]) continue;
    element_b(*geometry_, e, options_.bbar, bs);
    Eigen::VectorXd re = Eigen::VectorXd::Zero(2 * npe_);
    for (int q = 0; q < nq_; ++q) re += geometry_->measure(e, q) * bs[q].transpose() * state.points[e * nq_ + q].stress;
    const auto conn = mesh.element(e);
    for (int a = 0; a < npe_; ++a) f.segment<2>(2 * static_cast<Index>(conn[a])) += re.segment<2>(2 * a);
  }
  return f;
}

double MechanicsModel::equilibrium_error(const FieldState& state, const DisplacementBC& bcs) const {
  const Eigen::VectorXd f = internal_force(state);
  Eigen::VectorXd free = f;
  for (Index d : bcs.dofs) free(d) = 0.0;
  const auto act = active_nodes(*mesh_, state.active);
  for (Index n = 0; n < mesh_->num_nodes(); ++n)
    if (!act[n]) free.segment<2>(2 * n).setZero();
  // Scale: sum of |B^T sigma| contributions is approximated by the reaction norm
  // plus the norm of the element-level forces.
  double scale = 0.0;
  {
    std::vector<BMatrix> bs;
    for (Index e = 0; e < mesh_->num_elements(); ++e) {
      if (!state.active[e]) continue;
      element_b(*geometry_, e, options_.bbar, bs);
      Eigen::VectorXd re = Eigen::VectorXd::Zero(2 * npe_);
      for (int q = 0; q < nq_; ++q) re += geometry_->measure(e, q) * bs[q].transpose() * state.points[e * nq_ + q].stress;
      scale += re.squaredNorm();
    }
  }
  scale = std::sqrt(scale);
  return scale > 0.0 ? free.norm() / scale : 0.0;
}

Eigen::VectorXd MechanicsModel::hydrostatic_stress(const FieldState& state) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(geometry_->num_points());
  for (Index p = 0; p < out.size(); ++p) out(p) = mandel::trace(state.points[p].stress) / 3.0;
  return out;
}

}  // namespace hydroweld
