#include "hydroweld/fem/projection.hpp"

namespace hydroweld::fem {

Eigen::VectorXd lumped_weights(const MeshGeometry& geometry, const std::vector<char>& active) {
  const Mesh& mesh = geometry.mesh();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(mesh.num_nodes());
  const int nq = geometry.points_per_element();
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (!active[e]) continue;
    const auto conn = mesh.element(e);
    for (int q = 0; q < nq; ++q) {
      const double dv = geometry.measure(e, q);
      const auto n = geometry.shape(q);
      for (std::size_t a = 0; a < conn.size(); ++a) w(conn[a]) += n(a) * dv;
    }
  }
  return w;
}

Eigen::VectorXd project_to_nodes(const MeshGeometry& geometry, const std::vector<char>& active,
                                 const Eigen::VectorXd& values) {
  const Mesh& mesh = geometry.mesh();
  Eigen::VectorXd num = Eigen::VectorXd::Zero(mesh.num_nodes());
  Eigen::VectorXd den = Eigen::VectorXd::Zero(mesh.num_nodes());
  const int nq = geometry.points_per_element();
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (!active[e]) continue;
    const auto conn = mesh.element(e);
    for (int q = 0; q < nq; ++q) {
      const double dv = geometry.measure(e, q);
      const double v = values(geometry.point_index(e, q));
      const auto n = geometry.shape(q);
      for (std::size_t a = 0; a < conn.size(); ++a) {
        num(conn[a]) += n(a) * v * dv;
        den(conn[a]) += n(a) * dv;
      }
    }
  }
  for (Index i = 0; i < num.size(); ++i) num(i) = den(i) > 0.0 ? num(i) / den(i) : 0.0;
  return num;
}

double interpolate(const MeshGeometry& geometry, const Eigen::VectorXd& nodal, Index e, int q) {
  const auto conn = geometry.mesh().element(e);
  const auto n = geometry.shape(q);
  double v = 0.0;
  for (std::size_t a = 0; a < conn.size(); ++a) v += n(a) * nodal(conn[a]);
  return v;
}

Eigen::VectorXd interpolate_to_points(const MeshGeometry& geometry, const Eigen::VectorXd& nodal) {
  Eigen::VectorXd out(geometry.num_points());
  const int nq = geometry.points_per_element();
  for (Index e = 0; e < geometry.mesh().num_elements(); ++e)
    for (int q = 0; q < nq; ++q) out(geometry.point_index(e, q)) = interpolate(geometry, nodal, e, q);
  return out;
}

}  // namespace hydroweld::fem
