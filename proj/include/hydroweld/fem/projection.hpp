#pragma once

#include "hydroweld/mesh/mesh.hpp"

#include <Eigen/Core>
#include <vector>

namespace hydroweld::fem {

/// Lumped-mass L2 projection of quadrature-point values onto nodes of the
/// active elements. Nodes not touched by any active element get zero.
Eigen::VectorXd project_to_nodes(const MeshGeometry& geometry, const std::vector<char>& active_elements,
                                 const Eigen::VectorXd& point_values);

/// Interpolate a nodal field to all quadrature points.
Eigen::VectorXd interpolate_to_points(const MeshGeometry& geometry, const Eigen::VectorXd& nodal);

/// Value of a nodal field at point q of element e.
double interpolate(const MeshGeometry& geometry, const Eigen::VectorXd& nodal, Index e, int q);

/// Lumped nodal weights: sum over active elements of the integral of each shape function.
Eigen::VectorXd lumped_weights(const MeshGeometry& geometry, const std::vector<char>& active_elements);

}  // namespace hydroweld::fem
