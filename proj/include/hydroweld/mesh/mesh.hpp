#pragma once

#include "hydroweld/fem/reference_element.hpp"
#include "hydroweld/types.hpp"

#include <Eigen/Core>

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hydroweld {

/// Structured quadrilateral mesh in the (r, z) half-plane (axisymmetric) or
/// the (x, y) plane (plane strain). Immutable once generated.
///
/// Coordinates are in mm. Node sets are unordered index collections, node
/// paths are ordered polylines (fusion lines, ligaments). Element regions
/// partition the mesh into BM / HAZ / WM.
struct Mesh {
  int order = 1;
  Kinematics kinematics = Kinematics::PlaneStrain;
  Eigen::Matrix2Xd nodes;
  std::vector<int> connectivity;
  std::vector<Region> regions;
  std::map<std::string, std::vector<int>> node_sets;
  std::map<std::string, std::vector<int>> element_sets;
  std::map<std::string, std::vector<int>> node_paths;
  std::map<std::string, double> parameters;
  int n_beads = 0;

  int nodes_per_element() const { return (order + 1) * (order + 1); }
  Index num_nodes() const { return nodes.cols(); }
  Index num_elements() const { return static_cast<Index>(regions.size()); }
  bool axisymmetric() const { return kinematics == Kinematics::Axisymmetric; }

  std::span<const int> element(Index e) const {
    const auto npe = nodes_per_element();
    return {connectivity.data() + e * npe, static_cast<std::size_t>(npe)};
  }

  const std::vector<int>& node_set(const std::string& name) const;
  const std::vector<int>& element_set(const std::string& name) const;
  const std::vector<int>& node_path(const std::string& name) const;
  bool has_node_set(const std::string& name) const { return node_sets.count(name) > 0; }

  /// Elements of bead k (1-based).
  const std::vector<int>& bead(int k) const { return element_set("bead_" + std::to_string(k)); }

  Vec2 element_centroid(Index e) const;

  /// Stable fingerprint of topology and coordinates, used to refuse state
  /// transfer between different meshes.
  std::uint64_t fingerprint() const;
};

/// Per-quadrature-point geometry for every element: physical gradients, the
/// integration measure (including 2*pi*r for axisymmetric meshes) and
/// positions.
class MeshGeometry {
 public:
  explicit MeshGeometry(const Mesh& mesh);

  const Mesh& mesh() const { return *mesh_; }
  const fem::ReferenceQuad& reference() const { return ref_; }
  int points_per_element() const { return nq_; }
  Index num_points() const { return static_cast<Index>(dv_.size()); }
  Index point_index(Index e, int q) const { return e * nq_ + q; }

  /// Shape values at point q (column of the reference value table).
  auto shape(int q) const { return ref_.shape_values().col(q); }
  /// Physical shape-function gradients (2 x npe) at point q of element e.
  Eigen::Map<const Eigen::Matrix2Xd> gradients(Index e, int q) const {
    return {grads_.data() + 2 * npe_ * (e * nq_ + q), 2, npe_};
  }
  /// Integration weight times Jacobian determinant (times 2*pi*r if axisymmetric).
  double measure(Index e, int q) const { return dv_[e * nq_ + q]; }
  Vec2 position(Index e, int q) const { return pos_.col(e * nq_ + q); }
  double element_volume(Index e) const;
  double min_jacobian() const { return min_det_; }

 private:
  const Mesh* mesh_;
  fem::ReferenceQuad ref_;
  int npe_;
  int nq_;
  std::vector<double> grads_;
  std::vector<double> dv_;
  Eigen::Matrix2Xd pos_;
  double min_det_;
};

/// Element edge on the boundary of an element set.
struct BoundaryEdge {
  int element;
  int local_edge;
};

/// Edges of active elements not shared with another active element.
std::vector<BoundaryEdge> free_edges(const Mesh& mesh, const std::vector<char>& active);

/// Global node indices along a boundary edge (counter-clockwise).
std::vector<int> edge_node_indices(const Mesh& mesh, const BoundaryEdge& edge);

/// Edge quadrature: for each Gauss point, shape values along the edge nodes,
/// the integration measure (ds, times 2*pi*r when axisymmetric) and the
/// outward unit normal.
struct EdgePoint {
  Eigen::VectorXd shape;
  double measure;
  Vec2 position;
  Vec2 normal;
};
std::vector<EdgePoint> edge_quadrature(const Mesh& mesh, const BoundaryEdge& edge);

/// Nodes touched by at least one active element.
std::vector<char> active_nodes(const Mesh& mesh, const std::vector<char>& active_elements);

/// Nearest node to a point, optionally restricted to a node mask.
int nearest_node(const Mesh& mesh, const Vec2& p, const std::vector<char>* mask = nullptr);

}  // namespace hydroweld
