#include "hydroweld/fem/scalar_operators.hpp"

#include "hydroweld/fem/sparse_system.hpp"

namespace hydroweld::fem {

ScalarOperators::ScalarOperators(const MeshGeometry& geometry, bool upwind)
    : geometry_(&geometry), npe_(geometry.mesh().nodes_per_element()) {
  const Index ne = geometry.mesh().num_elements();
  stiffness_.assign(static_cast<std::size_t>(ne) * npe_ * npe_, 0.0);
  lumped_.assign(static_cast<std::size_t>(ne) * npe_, 0.0);
  Eigen::MatrixXd k(npe_, npe_);
  for (Index e = 0; e < ne; ++e) {
    k.setZero();
    Eigen::Map<Eigen::VectorXd> m(lumped_.data() + static_cast<std::size_t>(e) * npe_, npe_);
    for (int q = 0; q < geometry.points_per_element(); ++q) {
      const auto g = geometry.gradients(e, q);
      const double dv = geometry.measure(e, q);
      k.noalias() += dv * g.transpose() * g;
      m += dv * geometry.shape(q);
    }
    if (upwind) discrete_upwind(k);
    Eigen::Map<Eigen::MatrixXd>(stiffness_.data() + static_cast<std::size_t>(e) * npe_ * npe_, npe_, npe_) = k;
  }
}

}  // namespace hydroweld::fem
