#include "hydroweld/mesh/mesh.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

namespace hydroweld {

namespace {

template <typename Map>
const std::vector<int>& lookup(const Map& m, const std::string& name, const char* kind) {
  auto it = m.find(name);
  if (it == m.end()) throw std::out_of_range(std::string("mesh has no ") + kind + " '" + name + "'");
  return it->second;
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

const std::vector<int>& Mesh::node_set(const std::string& name) const { return lookup(node_sets, name, "node set"); }
const std::vector<int>& Mesh::element_set(const std::string& name) const {
  return lookup(element_sets, name, "element set");
}
const std::vector<int>& Mesh::node_path(const std::string& name) const { return lookup(node_paths, name, "node path"); }

Vec2 Mesh::element_centroid(Index e) const {
  Vec2 c = Vec2::Zero();
  const auto conn = element(e);
  for (int n : conn) c += nodes.col(n);
  return c / static_cast<double>(conn.size());
}

std::uint64_t Mesh::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  h = fnv1a(h, &order, sizeof(order));
  const int kin = static_cast<int>(kinematics);
  h = fnv1a(h, &kin, sizeof(kin));
  h = fnv1a(h, nodes.data(), sizeof(double) * nodes.size());
  h = fnv1a(h, connectivity.data(), sizeof(int) * connectivity.size());
  return h;
}

MeshGeometry::MeshGeometry(const Mesh& mesh)
    : mesh_(&mesh), ref_(mesh.order), npe_(mesh.nodes_per_element()), nq_(ref_.num_points()) {
  const Index ne = mesh.num_elements();
  grads_.resize(static_cast<std::size_t>(2 * npe_ * nq_ * ne));
  dv_.resize(static_cast<std::size_t>(nq_ * ne));
  pos_.resize(2, nq_ * ne);
  min_det_ = std::numeric_limits<double>::infinity();
  Eigen::Matrix2Xd xe(2, npe_);
  for (Index e = 0; e < ne; ++e) {
    const auto conn = mesh.element(e);
    for (int a = 0; a < npe_; ++a) xe.col(a) = mesh.nodes.col(conn[a]);
    for (int q = 0; q < nq_; ++q) {
      const auto& dref = ref_.shape_gradients()[q];
      const Eigen::Matrix2d jac = dref * xe.transpose();  // rows: d/dxi, d/deta; cols: x, y
      const double det = jac.determinant();
      min_det_ = std::min(min_det_, det);
      if (!(det > 0.0)) {
        std::ostringstream os;
        os << "degenerate element " << e << ": Jacobian determinant " << det << " at point " << q;
        throw std::invalid_argument(os.str());
      }
      const Eigen::Matrix2Xd g = jac.inverse() * dref;
      std::memcpy(grads_.data() + 2 * npe_ * (e * nq_ + q), g.data(), sizeof(double) * 2 * npe_);
      const Vec2 x = xe * ref_.shape_values().col(q);
      pos_.col(e * nq_ + q) = x;
      double dv = det * ref_.weights()(q);
      if (mesh.axisymmetric()) dv *= 2.0 * constants::pi * x.x();
      dv_[e * nq_ + q] = dv;
    }
  }
}

double MeshGeometry::element_volume(Index e) const {
  double v = 0.0;
  for (int q = 0; q < nq_; ++q) v += measure(e, q);
  return v;
}

std::vector<BoundaryEdge> free_edges(const Mesh& mesh, const std::vector<char>& active) {
  const fem::ReferenceQuad ref(mesh.order);
  const auto corners = ref.corners();
  std::map<std::pair<int, int>, std::pair<int, BoundaryEdge>> count;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (!active[e]) continue;
    const auto conn = mesh.element(e);
    for (int k = 0; k < 4; ++k) {
      int a = conn[corners[k]], b = conn[corners[(k + 1) % 4]];
      auto key = std::minmax(a, b);
      auto& slot = count[{key.first, key.second}];
      slot.first += 1;
      slot.second = {static_cast<int>(e), k};
    }
  }
  std::vector<BoundaryEdge> out;
  for (const auto& [key, val] : count)
    if (val.first == 1) out.push_back(val.second);
  std::sort(out.begin(), out.end(), [](const BoundaryEdge& x, const BoundaryEdge& y) {
    return x.element != y.element ? x.element < y.element : x.local_edge < y.local_edge;
  });
  return out;
}

std::vector<int> edge_node_indices(const Mesh& mesh, const BoundaryEdge& edge) {
  const fem::ReferenceQuad ref(mesh.order);
  const auto conn = mesh.element(edge.element);
  std::vector<int> out;
  for (int a : ref.edge_nodes(edge.local_edge)) out.push_back(conn[a]);
  return out;
}

std::vector<EdgePoint> edge_quadrature(const Mesh& mesh, const BoundaryEdge& edge) {
  const auto ids = edge_node_indices(mesh, edge);
  const int n = static_cast<int>(ids.size());
  const auto rule = fem::gauss_legendre(mesh.order + 1);
  std::vector<EdgePoint> out;
  Eigen::VectorXd v(n), d(n);
  for (std::size_t g = 0; g < rule.points.size(); ++g) {
    fem::lagrange_1d(mesh.order, rule.points[g], v, d);
    Vec2 x = Vec2::Zero(), t = Vec2::Zero();
    for (int a = 0; a < n; ++a) {
      x += v(a) * mesh.nodes.col(ids[a]);
      t += d(a) * mesh.nodes.col(ids[a]);
    }
    const double jac = t.norm();
    EdgePoint p;
    p.shape = v;
    p.position = x;
    // Edges run counter-clockwise, so the outward normal is the tangent rotated clockwise.
    p.normal = Vec2(t.y(), -t.x()) / jac;
    p.measure = jac * rule.weights[g] * (mesh.axisymmetric() ? 2.0 * constants::pi * x.x() : 1.0);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<char> active_nodes(const Mesh& mesh, const std::vector<char>& active_elements) {
  std::vector<char> out(mesh.num_nodes(), 0);
  for (Index e = 0; e < mesh.num_elements(); ++e)
    if (active_elements[e])
      for (int n : mesh.element(e)) out[n] = 1;
  return out;
}

int nearest_node(const Mesh& mesh, const Vec2& p, const std::vector<char>* mask) {
  int best = -1;
  double dmin = std::numeric_limits<double>::infinity();
  for (Index n = 0; n < mesh.num_nodes(); ++n) {
    if (mask && !(*mask)[n]) continue;
    const double d = (mesh.nodes.col(n) - p).squaredNorm();
    if (d < dmin) {
      dmin = d;
      best = static_cast<int>(n);
    }
  }
  return best;
}

}  // namespace hydroweld
