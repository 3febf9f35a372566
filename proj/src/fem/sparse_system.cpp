#include "hydroweld/fem/sparse_system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hydroweld::fem {

DofMap::DofMap(Index num_nodes, int components, const std::vector<char>& active_nodes,
               const std::vector<char>& constrained)
    : components_(components) {
  equation_.assign(static_cast<std::size_t>(num_nodes * components), -1);
  int next = 0;
  for (Index n = 0; n < num_nodes; ++n) {
    if (!active_nodes[n]) continue;
    for (int c = 0; c < components; ++c) {
      const Index d = n * components + c;
      if (!constrained.empty() && constrained[d]) continue;
      equation_[d] = next++;
    }
  }
  num_equations_ = next;
}

Eigen::VectorXd DofMap::restrict(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(num_equations_);
  for (Index d = 0; d < num_dofs(); ++d)
    if (equation_[d] >= 0) out(equation_[d]) = full(d);
  return out;
}

Eigen::VectorXd DofMap::expand(const Eigen::VectorXd& reduced) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(num_dofs());
  for (Index d = 0; d < num_dofs(); ++d)
    if (equation_[d] >= 0) out(d) = reduced(equation_[d]);
  return out;
}

SparseSystem::SparseSystem(const Mesh& mesh, const std::vector<char>& active_elements, const DofMap& dofs)
    : dofs_(&dofs), npe_(mesh.nodes_per_element()), ndof_e_(npe_ * dofs.components()), mesh_(&mesh) {
  const int nc = dofs.components();
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<int> eq(ndof_e_);
  element_.assign(mesh.num_elements(), -1);
  int count = 0;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (!active_elements[e]) continue;
    element_[e] = count++;
    const auto conn = mesh.element(e);
    for (int a = 0; a < npe_; ++a)
      for (int c = 0; c < nc; ++c) eq[a * nc + c] = dofs.equation(static_cast<Index>(conn[a]) * nc + c);
    for (int i = 0; i < ndof_e_; ++i)
      if (eq[i] >= 0)
        for (int j = 0; j < ndof_e_; ++j)
          if (eq[j] >= 0) trip.emplace_back(eq[i], eq[j], 0.0);
  }
  const Index n = dofs.num_equations();
  matrix_.resize(n, n);
  matrix_.setFromTriplets(trip.begin(), trip.end());
  matrix_.makeCompressed();
  residual_ = Eigen::VectorXd::Zero(dofs.num_dofs());

  slots_.assign(static_cast<std::size_t>(count) * ndof_e_ * ndof_e_, -1);
  const int* outer = matrix_.outerIndexPtr();
  const int* inner = matrix_.innerIndexPtr();
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (element_[e] < 0) continue;
    const auto conn = mesh.element(e);
    for (int a = 0; a < npe_; ++a)
      for (int c = 0; c < nc; ++c) eq[a * nc + c] = dofs.equation(static_cast<Index>(conn[a]) * nc + c);
    int* s = slots_.data() + static_cast<std::size_t>(element_[e]) * ndof_e_ * ndof_e_;
    // Column-major storage: column j holds rows i.
    for (int j = 0; j < ndof_e_; ++j) {
      if (eq[j] < 0) continue;
      const int* begin = inner + outer[eq[j]];
      const int* end = inner + outer[eq[j] + 1];
      for (int i = 0; i < ndof_e_; ++i) {
        if (eq[i] < 0) continue;
        const int* it = std::lower_bound(begin, end, eq[i]);
        s[i + ndof_e_ * j] = static_cast<int>(it - inner);
      }
    }
  }
}

void SparseSystem::zero() {
  std::fill(matrix_.valuePtr(), matrix_.valuePtr() + matrix_.nonZeros(), 0.0);
  residual_.setZero();
}

void SparseSystem::add_matrix(Index e, const Eigen::Ref<const Eigen::MatrixXd>& ke) {
  const int row = element_[e];
  if (row < 0) return;
  const int* s = slots_.data() + static_cast<std::size_t>(row) * ndof_e_ * ndof_e_;
  double* v = matrix_.valuePtr();
  for (int j = 0; j < ndof_e_; ++j)
    for (int i = 0; i < ndof_e_; ++i) {
      const int k = s[i + ndof_e_ * j];
      if (k >= 0) v[k] += ke(i, j);
    }
}

void SparseSystem::add_vector(Index e, const Eigen::Ref<const Eigen::VectorXd>& re) {
  if (element_[e] < 0) return;
  const int nc = dofs_->components();
  const auto conn = mesh_->element(e);
  for (int a = 0; a < npe_; ++a)
    for (int c = 0; c < nc; ++c) residual_(static_cast<Index>(conn[a]) * nc + c) += re(a * nc + c);
}

void SparseSystem::add(Index e, const Eigen::Ref<const Eigen::MatrixXd>& ke, const Eigen::Ref<const Eigen::VectorXd>& re) {
  add_matrix(e, ke);
  add_vector(e, re);
}

void SparseSystem::add_diagonal(Index dof, double k, double r) {
  residual_(dof) += r;
  const int eq = dofs_->equation(dof);
  if (eq >= 0) matrix_.coeffRef(eq, eq) += k;
}

void LinearSolver::factorize(const Eigen::SparseMatrix<double>& a) {
  const bool same = analyzed_ && a.rows() == rows_ && a.nonZeros() == nnz_;
  if (kind_ == Kind::SymmetricLDLT) {
    if (!same) ldlt_.analyzePattern(a);
    ldlt_.factorize(a);
    if (ldlt_.info() != Eigen::Success) throw FatalError("sparse LDLT factorization failed (singular system)");
  } else {
    if (!same) lu_.analyzePattern(a);
    lu_.factorize(a);
    if (lu_.info() != Eigen::Success) throw FatalError("sparse LU factorization failed: " + lu_.lastErrorMessage());
  }
  analyzed_ = true;
  rows_ = a.rows();
  nnz_ = a.nonZeros();
}

Eigen::VectorXd LinearSolver::solve(const Eigen::VectorXd& b) const {
  Eigen::VectorXd x = kind_ == Kind::SymmetricLDLT ? Eigen::VectorXd(ldlt_.solve(b)) : Eigen::VectorXd(lu_.solve(b));
  if (!x.allFinite()) throw FatalError("linear solve produced non-finite values");
  return x;
}

void discrete_upwind(Eigen::Ref<Eigen::MatrixXd> k) {
  const Index n = k.rows();
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double d = std::max({0.0, k(i, j), k(j, i)});
      if (d == 0.0) continue;
      k(i, j) -= d;
      k(j, i) -= d;
      k(i, i) += d;
      k(j, j) += d;
    }
}

void check_finite(Index e, const Eigen::Ref<const Eigen::MatrixXd>& ke, const Eigen::Ref<const Eigen::VectorXd>& re) {
  if (!ke.allFinite() || !re.allFinite()) {
    std::ostringstream os;
    os << "non-finite contribution from element " << e;
    throw FatalError(os.str());
  }
}

Eigen::VectorXd solve_linear(const SparseSystem& system, LinearSolver::Kind kind) {
  LinearSolver solver(kind);
  solver.factorize(system.matrix());
  return system.dofs().expand(solver.solve(-system.reduced_residual()));
}

}  // namespace hydroweld::fem
