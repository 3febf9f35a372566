#pragma once

#include "hydroweld/mesh/mesh.hpp"

#include <Eigen/Core>
#include <vector>

namespace hydroweld::fem {

/// Per-element geometric operators shared by the scalar solvers: the unit
/// diffusion matrix (integral of grad N_a . grad N_b, discretely upwinded)
/// and the row-sum lumped weights (integral of N_a).
class ScalarOperators {
 public:
  explicit ScalarOperators(const MeshGeometry& geometry, bool upwind = true);

  const MeshGeometry& geometry() const { return *geometry_; }
  int nodes_per_element() const { return npe_; }
  Eigen::Map<const Eigen::MatrixXd> stiffness(Index e) const {
    return {stiffness_.data() + static_cast<std::size_t>(e) * npe_ * npe_, npe_, npe_};
  }
  Eigen::Map<const Eigen::VectorXd> lumped(Index e) const {
    return {lumped_.data() + static_cast<std::size_t>(e) * npe_, npe_};
  }

 private:
  const MeshGeometry* geometry_;
  int npe_;
  std::vector<double> stiffness_;
  std::vector<double> lumped_;
};

}  // namespace hydroweld::fem
