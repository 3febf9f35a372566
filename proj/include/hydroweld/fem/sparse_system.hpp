#pragma once

#include "hydroweld/mesh/mesh.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <memory>
#include <vector>

namespace hydroweld::fem {

/// Numbering of nodal unknowns. Dof index is node * components + component;
/// equations are assigned to dofs on active nodes that are not constrained.
class DofMap {
 public:
  DofMap() = default;
  DofMap(Index num_nodes, int components, const std::vector<char>& active_nodes, const std::vector<char>& constrained);

  int components() const { return components_; }
  Index num_dofs() const { return static_cast<Index>(equation_.size()); }
  Index num_equations() const { return num_equations_; }
  /// Equation number of a dof, or -1 if constrained or inactive.
  int equation(Index dof) const { return equation_[dof]; }
  bool is_free(Index dof) const { return equation_[dof] >= 0; }

  /// Gather the free part of a full-length vector.
  Eigen::VectorXd restrict(const Eigen::VectorXd& full) const;
  /// Scatter a reduced vector into a full-length one (constrained entries zero).
  Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const;

 private:
  int components_ = 1;
  std::vector<int> equation_;
  Index num_equations_ = 0;
};

/// Reduced global matrix on a fixed sparsity pattern plus a full-length
/// residual. Element blocks are scattered through precomputed slot tables, so
/// repeated assembly touches no index structures and is order-deterministic.
class SparseSystem {
 public:
  SparseSystem(const Mesh& mesh, const std::vector<char>& active_elements, const DofMap& dofs);

  const DofMap& dofs() const { return *dofs_; }
  void zero();
  /// Add an element block: ke is (npe*nc)^2, re is npe*nc, ordered node-major.
  void add(Index e, const Eigen::Ref<const Eigen::MatrixXd>& ke, const Eigen::Ref<const Eigen::VectorXd>& re);
  void add_matrix(Index e, const Eigen::Ref<const Eigen::MatrixXd>& ke);
  void add_vector(Index e, const Eigen::Ref<const Eigen::VectorXd>& re);
  /// Direct contribution to one full dof (boundary terms).
  void add_diagonal(Index dof, double k, double r);

  Eigen::SparseMatrix<double>& matrix() { return matrix_; }
  const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }
  /// Full-length residual (free and constrained dofs); constrained entries are reactions.
  Eigen::VectorXd& residual() { return residual_; }
  const Eigen::VectorXd& residual() const { return residual_; }
  Eigen::VectorXd reduced_residual() const { return dofs_->restrict(residual_); }

 private:
  const DofMap* dofs_;
  int npe_, ndof_e_;
  const Mesh* mesh_;
  Eigen::SparseMatrix<double> matrix_;
  Eigen::VectorXd residual_;
  std::vector<int> slots_;     // per element, (ndof_e)^2 value offsets or -1
  std::vector<int> element_;   // element -> row in slots_, or -1 if inactive
};

/// Sparse direct solver; the symbolic analysis is reused while the pattern is
/// unchanged.
class LinearSolver {
 public:
  enum class Kind { SymmetricLDLT, GeneralLU };
  explicit LinearSolver(Kind kind = Kind::SymmetricLDLT) : kind_(kind) {}

  /// Factorize; throws FatalError on breakdown.
  void factorize(const Eigen::SparseMatrix<double>& a);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  /// Forget the cached analysis (pattern changed).
  void reset() { analyzed_ = false; }

 private:
  Kind kind_;
  bool analyzed_ = false;
  Eigen::Index rows_ = -1, nnz_ = -1;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
};

/// Check an element contribution for NaN/Inf; throws FatalError with the element id.
void check_finite(Index e, const Eigen::Ref<const Eigen::MatrixXd>& ke, const Eigen::Ref<const Eigen::VectorXd>& re);

/// Assemble every active element: `kernel(e, ke, re)` fills the element
/// matrix and residual (sized and zeroed beforehand).
template <typename Kernel>
void assemble(SparseSystem& system, const Mesh& mesh, const std::vector<char>& active, Kernel&& kernel) {
  const Index n = mesh.nodes_per_element() * system.dofs().components();
  Eigen::MatrixXd ke(n, n);
  Eigen::VectorXd re(n);
  system.zero();
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (!active[e]) continue;
    ke.setZero();
    re.setZero();
    kernel(e, ke, re);
    check_finite(e, ke, re);
    system.add(e, ke, re);
  }
}

/// Newton correction of an assembled system: solves K dx = -r on the free
/// equations and returns the full-length update (zero on constrained dofs).
Eigen::VectorXd solve_linear(const SparseSystem& system,
                             LinearSolver::Kind kind = LinearSolver::Kind::SymmetricLDLT);

/// Replace positive off-diagonal entries of an element operator by an
/// equivalent symmetric graph-Laplacian correction (discrete upwinding).
/// Column sums are preserved, so conservation is unchanged, and the result
/// has non-positive off-diagonals.
void discrete_upwind(Eigen::Ref<Eigen::MatrixXd> k);


}  // namespace hydroweld::fem
