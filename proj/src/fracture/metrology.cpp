#include "hydroweld/fracture/metrology.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace hydroweld {

double measure_crack_extension(const Mesh& mesh, const Eigen::VectorXd& phi, const std::vector<int>& path,
                               double threshold) {
  if (path.empty()) return 0.0;
  int last = -1;
  for (int i = 0; i < static_cast<int>(path.size()); ++i)
    if (phi(path[i]) >= threshold) last = i;
  if (last < 0) return 0.0;
  double s = 0.0;
  for (int i = 1; i <= last; ++i) s += (mesh.nodes.col(path[i]) - mesh.nodes.col(path[i - 1])).norm();
  if (last + 1 < static_cast<int>(path.size())) {
    const double a = phi(path[last]), b = phi(path[last + 1]);
    const double len = (mesh.nodes.col(path[last + 1]) - mesh.nodes.col(path[last])).norm();
    if (a > b) s += std::clamp((a - threshold) / (a - b), 0.0, 1.0) * len;
  }
  return s;
}

Eigen::VectorXd element_means(const Mesh& mesh, const Eigen::VectorXd& nodal) {
  Eigen::VectorXd out(mesh.num_elements());
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    double s = 0.0;
    for (int n : mesh.element(e)) s += nodal(n);
    out(e) = s / mesh.nodes_per_element();
  }
  return out;
}

namespace {

// Corner-node pair of each element edge, sorted, for adjacency lookup.
std::vector<std::array<std::pair<int, int>, 4>> corner_edges(const Mesh& mesh) {
  const fem::ReferenceQuad ref(mesh.order);
  std::vector<std::array<std::pair<int, int>, 4>> out(mesh.num_elements());
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const auto conn = mesh.element(e);
    for (int k = 0; k < 4; ++k) {
      const auto en = ref.edge_nodes(k);
      int a = conn[en.front()], b = conn[en.back()];
      out[e][k] = {std::min(a, b), std::max(a, b)};
    }
  }
  return out;
}

}  // namespace

ThroughThickness detect_through_thickness_elements(const Mesh& mesh, const Eigen::VectorXd& value,
                                                   const std::vector<int>& inner, const std::vector<int>& outer,
                                                   double threshold, const std::vector<char>* active) {
  const Index ne = mesh.num_elements();
  std::vector<char> in_set(mesh.num_nodes(), 0), out_set(mesh.num_nodes(), 0);
  for (int n : inner) in_set[n] = 1;
  for (int n : outer) out_set[n] = 1;
  const auto edges = corner_edges(mesh);
  std::map<std::pair<int, int>, std::vector<int>> by_edge;
  for (Index e = 0; e < ne; ++e)
    for (const auto& ed : edges[e]) by_edge[ed].push_back(static_cast<int>(e));

  auto cracked = [&](Index e) { return (!active || (*active)[e]) && value(e) >= threshold; };
  auto touches = [&](Index e, const std::vector<char>& set) {
    for (const auto& ed : edges[e])
      if (set[ed.first] && set[ed.second]) return true;
    return false;
  };

  std::vector<int> parent(ne, -2);
  std::queue<int> queue;
  for (Index e = 0; e < ne; ++e)
    if (cracked(e) && touches(e, in_set)) {
      parent[e] = -1;
      queue.push(static_cast<int>(e));
    }
  ThroughThickness out;
  while (!queue.empty()) {
    const int e = queue.front();
    queue.pop();
    if (touches(e, out_set)) {
      out.connected = true;
      for (int k = e; k >= 0; k = parent[k]) out.elements.push_back(k);
      std::reverse(out.elements.begin(), out.elements.end());
      return out;
    }
    for (const auto& ed : edges[e])
      for (int f : by_edge[ed])
        if (f != e && parent[f] == -2 && cracked(f)) {
          parent[f] = e;
          queue.push(f);
        }
  }
  return out;
}

ThroughThickness detect_through_thickness(const Mesh& mesh, const Eigen::VectorXd& phi, double threshold,
                                          const std::vector<char>* active) {
  return detect_through_thickness_elements(mesh, element_means(mesh, phi), mesh.node_set("inner_surface"),
                                           mesh.node_set("outer_surface"), threshold, active);
}

}  // namespace hydroweld
