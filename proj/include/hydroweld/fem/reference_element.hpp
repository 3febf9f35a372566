#pragma once

#include "hydroweld/types.hpp"

#include <Eigen/Core>
#include <vector>

namespace hydroweld::fem {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule1D {
  std::vector<double> points;
  std::vector<double> weights;
};

GaussRule1D gauss_legendre(int n_points);

/// 1D Lagrange basis of the given order on equispaced nodes in [-1, 1].
/// Returns values and derivatives at xi.
void lagrange_1d(int order, double xi, Eigen::Ref<Eigen::VectorXd> values,
                 Eigen::Ref<Eigen::VectorXd> derivatives);

/// Tensor-product Lagrange quadrilateral of order 1 (Q4) or 2 (Q9).
///
/// Local node numbering is lexicographic: node (i, j) has index i + (p+1) j,
/// with i running along xi and j along eta. Quadrature uses (p+1)^2 Gauss
/// points, which integrates the mass matrix exactly on affine elements.
class ReferenceQuad {
 public:
  explicit ReferenceQuad(int order);

  int order() const { return order_; }
  int nodes_per_element() const { return (order_ + 1) * (order_ + 1); }
  int num_points() const { return static_cast<int>(weights_.size()); }

  const Eigen::Matrix2Xd& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  /// shape_values()(a, q) = N_a at point q.
  const Eigen::MatrixXd& shape_values() const { return values_; }
  /// shape_gradients()[q] is 2 x npe: row 0 d/dxi, row 1 d/deta.
  const std::vector<Eigen::Matrix2Xd>& shape_gradients() const { return gradients_; }

  /// Evaluate shape functions and parametric gradients at an arbitrary point.
  void evaluate(const Vec2& xi, Eigen::Ref<Eigen::VectorXd> values, Eigen::Ref<Eigen::Matrix2Xd> grads) const;

  /// Local node indices of the four corners, counter-clockwise from (-1,-1).
  std::array<int, 4> corners() const;
  /// Local node indices along edge k (0: eta=-1, 1: xi=+1, 2: eta=+1, 3: xi=-1),
  /// ordered counter-clockwise.
  std::vector<int> edge_nodes(int edge) const;
  /// Parametric coordinate of local node a.
  Vec2 node_coordinate(int a) const;

 private:
  int order_;
  Eigen::Matrix2Xd points_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd values_;
  std::vector<Eigen::Matrix2Xd> gradients_;
};

}  // namespace hydroweld::fem
