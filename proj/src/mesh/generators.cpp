#include "hydroweld/mesh/generators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hydroweld {

namespace {

/// Structured grid of nu x nv elements of the given order. `position(u, v)`
/// receives fractional element coordinates (u in [0, nu], v in [0, nv]).
/// Element-local numbering is lexicographic in (u, v).
struct StructuredGrid {
  int nu, nv, order;
  int node_u() const { return order * nu + 1; }
  int node_v() const { return order * nv + 1; }
  int node(int i, int j) const { return i + node_u() * j; }
};

void fill_grid(Mesh& mesh, const StructuredGrid& g, const std::function<Vec2(double, double)>& position) {
  const int p = g.order;
  mesh.order = p;
  mesh.nodes.resize(2, static_cast<Index>(g.node_u()) * g.node_v());
  for (int j = 0; j < g.node_v(); ++j)
    for (int i = 0; i < g.node_u(); ++i)
      mesh.nodes.col(g.node(i, j)) = position(static_cast<double>(i) / p, static_cast<double>(j) / p);
  const int npe = (p + 1) * (p + 1);
  mesh.connectivity.resize(static_cast<std::size_t>(g.nu) * g.nv * npe);
  for (int J = 0; J < g.nv; ++J)
    for (int I = 0; I < g.nu; ++I) {
      const int e = I + g.nu * J;
      for (int b = 0; b <= p; ++b)
        for (int a = 0; a <= p; ++a) mesh.connectivity[e * npe + a + (p + 1) * b] = g.node(p * I + a, p * J + b);
    }
  mesh.regions.assign(static_cast<std::size_t>(g.nu) * g.nv, Region::BM);
}

std::vector<int> grid_line_u(const StructuredGrid& g, int j) {
  std::vector<int> out;
  for (int i = 0; i < g.node_u(); ++i) out.push_back(g.node(i, j));
  return out;
}

std::vector<int> grid_line_v(const StructuredGrid& g, int i) {
  std::vector<int> out;
  for (int j = 0; j < g.node_v(); ++j) out.push_back(g.node(i, j));
  return out;
}

/// Cumulative fractions of a geometric size sequence from `first` capped at
/// `cap`, covering `span` and normalised to end exactly at 1.
std::vector<double> graded_fractions(double span, double first, double growth, double cap) {
  std::vector<double> cum{0.0};
  double size = first;
  while (cum.back() < span - 1e-12) {
    double next = cum.back() + std::min(size, cap);
    // Merge a sliver last element into its neighbour.
    if (span - next < 0.3 * std::min(size, cap) && next < span) next = span;
    cum.push_back(next);
    size *= growth;
  }
  const double total = cum.back();
  for (auto& c : cum) c /= total;
  return cum;
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

double PipeWeldGeometry::groove_half_width(double r, double root_gap) const {
  const double half_angle = 0.5 * weld_angle * constants::pi / 180.0;
  return 0.5 * root_gap + (r - inner_radius) * std::tan(half_angle);
}

Mesh generate_pipe_weld_mesh(const PipeWeldGeometry& geo, const RefinementSpec& ref) {
  if (!(geo.inner_radius > 0.0) || !(geo.thickness > 0.0))
    throw std::invalid_argument("pipe mesh: inner radius and thickness must be positive");
  if (!(geo.weld_angle > 0.0 && geo.weld_angle < 180.0))
    throw std::invalid_argument("pipe mesh: weld angle must lie in (0, 180) degrees");
  if (geo.n_beads < 1) throw std::invalid_argument("pipe mesh: at least one bead is required");
  if (!(ref.h_min > 0.0) || ref.h_max < ref.h_min) throw std::invalid_argument("pipe mesh: need 0 < h_min <= h_max");
  if (!(ref.root_gap > 0.0)) throw std::invalid_argument("pipe mesh: root gap must be positive");
  if (!(ref.haz_width > 0.0)) throw std::invalid_argument("pipe mesh: HAZ width must be positive");

  const double ri = geo.inner_radius, t = geo.thickness, ro = geo.outer_radius();
  const double half_len = 0.5 * geo.length;
  const double half_angle = 0.5 * geo.weld_angle * constants::pi / 180.0;
  const double haz_axial = ref.haz_width / std::cos(half_angle);
  auto w = [&](double r) { return geo.groove_half_width(r, ref.root_gap); };

  const double groove_width = 2.0 * w(ro);
  if (groove_width >= geo.length) {
    std::ostringstream os;
    os << "pipe mesh: groove width " << groove_width << " mm at the outer surface exceeds L0 = " << geo.length << " mm";
    throw std::invalid_argument(os.str());
  }
  if (w(ro) + haz_axial + ref.h_min >= half_len) {
    std::ostringstream os;
    os << "pipe mesh: groove plus HAZ band (" << 2.0 * (w(ro) + haz_axial) << " mm) leaves no base metal within L0 = "
       << geo.length << " mm";
    throw std::invalid_argument(os.str());
  }

  enum Zone { G = 0, H = 1, B = 2 };
  const int n_groove = std::max(1, static_cast<int>(std::ceil(0.5 * (w(ri) + w(ro)) / ref.h_min)));
  const int n_haz = std::max(1, static_cast<int>(std::ceil(haz_axial / ref.h_min)));
  const double span_mid = half_len - w(0.5 * (ri + ro)) - haz_axial;
  const auto bm_frac = graded_fractions(span_mid, ref.h_min * ref.growth, ref.growth, ref.h_max);

  struct ColumnElem {
    Zone zone;
    int side;
    double f0, f1;
  };
  std::vector<ColumnElem> right;
  for (int k = 0; k < n_groove; ++k) right.push_back({G, 1, double(k) / n_groove, double(k + 1) / n_groove});
  for (int k = 0; k < n_haz; ++k) right.push_back({H, 1, double(k) / n_haz, double(k + 1) / n_haz});
  for (std::size_t k = 0; k + 1 < bm_frac.size(); ++k) right.push_back({B, 1, bm_frac[k], bm_frac[k + 1]});
  std::vector<ColumnElem> cols;
  for (auto it = right.rbegin(); it != right.rend(); ++it) cols.push_back({it->zone, -1, it->f1, it->f0});
  cols.insert(cols.end(), right.begin(), right.end());

  auto zone_z = [&](Zone zone, int side, double f, double r) {
    double z = 0.0;
    switch (zone) {
      case G: z = w(r) * f; break;
      case H: z = w(r) + haz_axial * f; break;
      case B: z = w(r) + haz_axial + (half_len - w(r) - haz_axial) * f; break;
    }
    return side * z;
  };

  const int rows_per_bead = std::max(1, static_cast<int>(std::ceil(t / (geo.n_beads * ref.h_min))));
  const int n_rows = rows_per_bead * geo.n_beads;
  const int n_cols = static_cast<int>(cols.size());

  StructuredGrid grid{n_rows, n_cols, ref.order};
  Mesh mesh;
  mesh.kinematics = Kinematics::Axisymmetric;
  fill_grid(mesh, grid, [&](double u, double v) {
    const double r = ri + t * u / n_rows;
    const int c = std::min(static_cast<int>(std::floor(v)), n_cols - 1);
    const double s = v - c;
    const auto& col = cols[c];
    const double f = col.f0 + s * (col.f1 - col.f0);
    return Vec2(r, zone_z(col.zone, col.side, f, r));
  });

  mesh.n_beads = geo.n_beads;
  for (int J = 0; J < n_cols; ++J)
    for (int I = 0; I < n_rows; ++I) {
      const int e = I + n_rows * J;
      switch (cols[J].zone) {
        case G:
          mesh.regions[e] = Region::WM;
          mesh.element_sets["bead_" + std::to_string(I / rows_per_bead + 1)].push_back(e);
          break;
        case H: mesh.regions[e] = Region::HAZ; break;
        case B: mesh.regions[e] = Region::BM; break;
      }
      mesh.element_sets[std::string(region_name(mesh.regions[e]))].push_back(e);
    }

  mesh.node_sets["inner_surface"] = grid_line_v(grid, 0);
  mesh.node_sets["outer_surface"] = grid_line_v(grid, grid.node_u() - 1);
  mesh.node_sets["left_edge"] = grid_line_u(grid, 0);
  mesh.node_sets["right_edge"] = grid_line_u(grid, grid.node_v() - 1);

  // Node columns at the groove/HAZ interfaces and on the centreline.
  int j_center = -1, j_fl = -1, j_fr = -1;
  for (int J = 0; J < n_cols; ++J) {
    const auto& c = cols[J];
    if (c.zone == G && c.side == 1 && c.f0 == 0.0) j_center = ref.order * J;
    if (c.zone == G && c.side == 1 && c.f1 == 1.0) j_fr = ref.order * (J + 1);
    if (c.zone == G && c.side == -1 && c.f0 == 1.0) j_fl = ref.order * J;
  }
  mesh.node_paths["fusion_left"] = grid_line_u(grid, j_fl);
  mesh.node_paths["fusion_right"] = grid_line_u(grid, j_fr);
  mesh.node_paths["centerline"] = grid_line_u(grid, j_center);

  // Cavity edge of bead k: its nodes shared with material present before deposition.
  for (int k = 1; k <= geo.n_beads; ++k) {
    std::vector<char> before(mesh.num_elements(), 1);
    for (int kk = k; kk <= geo.n_beads; ++kk)
      for (int e : mesh.bead(kk)) before[e] = 0;
    const auto present = active_nodes(mesh, before);
    std::vector<int> edge;
    for (int e : mesh.bead(k))
      for (int n : mesh.element(e))
        if (present[n]) edge.push_back(n);
    mesh.node_sets["cavity_edge_bead_" + std::to_string(k)] = sorted_unique(edge);
  }

  mesh.parameters = {{"inner_radius", ri},
                     {"thickness", t},
                     {"length", geo.length},
                     {"weld_angle", geo.weld_angle},
                     {"root_gap", ref.root_gap},
                     {"haz_width", ref.haz_width},
                     {"h_min", ref.h_min},
                     {"h_max", ref.h_max},
                     {"rows", double(n_rows)},
                     {"columns", double(n_cols)},
                     {"grid_nodes_r", double(grid.node_u())},
                     {"grid_nodes_z", double(grid.node_v())}};
  return mesh;
}

Mesh generate_boundary_layer_mesh(const BoundaryLayerSpec& spec) {
  const double h = spec.tip_size, R = spec.outer_radius;
  if (!(h > 0.0) || !(R > 100.0 * h))
    throw std::invalid_argument("boundary-layer mesh: outer radius must exceed 100 x tip size");
  const double a = spec.patch_behind, b = spec.patch_ahead, c = spec.patch_height;
  if (!(a > 0.0 && b > 0.0 && c > 0.0) || std::max({a, b, c}) > 0.2 * R)
    throw std::invalid_argument("boundary-layer mesh: crack-tip patch must be small relative to the outer radius");
  const int p = spec.order;
  const int nxa = std::max(1, static_cast<int>(std::ceil(a / h - 1e-9)));
  const int nxb = std::max(1, static_cast<int>(std::ceil(b / h - 1e-9)));
  const int ny = std::max(1, static_cast<int>(std::ceil(c / h - 1e-9)));
  const int nx = nxa + nxb;

  Mesh mesh;
  mesh.kinematics = Kinematics::PlaneStrain;
  mesh.order = p;

  // Patch grid (u along x, v along y).
  StructuredGrid patch{nx, ny, p};
  auto patch_x = [&](double u) { return u <= nxa ? -a + a * u / nxa : b * (u - nxa) / nxb; };
  fill_grid(mesh, patch, [&](double u, double v) { return Vec2(patch_x(u), c * v / ny); });
  const Index n_patch_nodes = mesh.num_nodes();

  // Inner path of the ring: right side up, top leftwards, left side down.
  std::vector<int> path_nodes;
  for (int j = 0; j < patch.node_v(); ++j) path_nodes.push_back(patch.node(patch.node_u() - 1, j));
  for (int i = patch.node_u() - 2; i >= 0; --i) path_nodes.push_back(patch.node(i, patch.node_v() - 1));
  for (int j = patch.node_v() - 2; j >= 0; --j) path_nodes.push_back(patch.node(0, j));
  const int n_path_elems = (static_cast<int>(path_nodes.size()) - 1) / p;
  std::vector<double> arclen{0.0};
  for (std::size_t k = 1; k < path_nodes.size(); ++k)
    arclen.push_back(arclen.back() + (mesh.nodes.col(path_nodes[k]) - mesh.nodes.col(path_nodes[k - 1])).norm());
  const double total = arclen.back();

  const double g = spec.growth;
  const int layers = std::max(2, static_cast<int>(std::ceil(std::log(1.0 + R * (g - 1.0) / h) / std::log(g))));
  const double gM = std::pow(g, layers) - 1.0;
  auto s_of = [&](double v) { return (std::pow(g, v) - 1.0) / gM; };

  // Ring nodes: index (i, k) with i = 1..p*layers along the ray and k along the path.
  const int n_ray = p * layers;
  const int n_along = static_cast<int>(path_nodes.size());
  const Index first_ring = n_patch_nodes;
  mesh.nodes.conservativeResize(2, n_patch_nodes + static_cast<Index>(n_ray) * n_along);
  auto ring_node = [&](int i, int k) -> int {
    return i == 0 ? path_nodes[k] : static_cast<int>(first_ring + (i - 1) + static_cast<Index>(n_ray) * k);
  };
  for (int k = 0; k < n_along; ++k) {
    const Vec2 P = mesh.nodes.col(path_nodes[k]);
    const double theta = constants::pi * arclen[k] / total;
    const Vec2 Q(R * std::cos(theta), R * std::sin(theta));
    for (int i = 1; i <= n_ray; ++i) mesh.nodes.col(ring_node(i, k)) = P + (Q - P) * s_of(double(i) / p);
  }
  // Snap rim and axis nodes exactly.
  for (int i = 1; i <= n_ray; ++i) {
    mesh.nodes(1, ring_node(i, 0)) = 0.0;
    mesh.nodes(1, ring_node(i, n_along - 1)) = 0.0;
  }

  const int npe = (p + 1) * (p + 1);
  for (int K = 0; K < n_path_elems; ++K)
    for (int L = 0; L < layers; ++L) {
      for (int bb = 0; bb <= p; ++bb)
        for (int aa = 0; aa <= p; ++aa) mesh.connectivity.push_back(ring_node(p * L + aa, p * K + bb));
      mesh.regions.push_back(Region::BM);
    }
  (void)npe;

  std::vector<int> rim;
  for (int k = 0; k < n_along; ++k) rim.push_back(ring_node(n_ray, k));
  mesh.node_sets["outer_rim"] = rim;

  const int tip = patch.node(p * nxa, 0);
  std::vector<int> ligament, face;
  for (int i = p * nxa; i < patch.node_u(); ++i) ligament.push_back(patch.node(i, 0));
  for (int i = 1; i <= n_ray; ++i) ligament.push_back(ring_node(i, 0));
  for (int i = 0; i < p * nxa; ++i) face.push_back(patch.node(i, 0));
  for (int i = 1; i <= n_ray; ++i) face.push_back(ring_node(i, n_along - 1));
  mesh.node_sets["ligament"] = ligament;
  mesh.node_paths["ligament"] = ligament;
  mesh.node_sets["crack_face"] = sorted_unique(face);
  mesh.node_sets["crack_tip"] = {tip};
  mesh.element_sets["BM"].resize(mesh.num_elements());
  for (Index e = 0; e < mesh.num_elements(); ++e) mesh.element_sets["BM"][e] = static_cast<int>(e);
  mesh.parameters = {{"outer_radius", R},
                     {"tip_size", h},
                     {"patch_ahead", b},
                     {"patch_behind", a},
                     {"patch_height", c},
                     {"layers", double(layers)}};
  return mesh;
}

Mesh generate_rectangle_mesh(double x0, double x1, double y0, double y1, int nx, int ny, int order,
                             Kinematics kinematics) {
  if (nx < 1 || ny < 1 || !(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("rectangle mesh: bad extents");
  StructuredGrid grid{nx, ny, order};
  Mesh mesh;
  mesh.kinematics = kinematics;
  fill_grid(mesh, grid, [&](double u, double v) { return Vec2(x0 + (x1 - x0) * u / nx, y0 + (y1 - y0) * v / ny); });
  mesh.node_sets["left"] = grid_line_v(grid, 0);
  mesh.node_sets["right"] = grid_line_v(grid, grid.node_u() - 1);
  mesh.node_sets["bottom"] = grid_line_u(grid, 0);
  mesh.node_sets["top"] = grid_line_u(grid, grid.node_v() - 1);
  mesh.node_paths["bottom"] = grid_line_u(grid, 0);
  mesh.element_sets["BM"].resize(mesh.num_elements());
  for (Index e = 0; e < mesh.num_elements(); ++e) mesh.element_sets["BM"][e] = static_cast<int>(e);
  return mesh;
}

Mesh generate_strip_mesh(double thickness, int n_elem, int order) {
  if (n_elem < 2) throw std::invalid_argument("strip mesh: at least two elements are required");
  if (!(thickness > 0.0)) throw std::invalid_argument("strip mesh: thickness must be positive");
  Mesh mesh = generate_rectangle_mesh(0.0, thickness, 0.0, thickness / n_elem, n_elem, 1, order);
  mesh.node_sets["charging"] = mesh.node_sets["left"];
  mesh.node_sets["exit"] = mesh.node_sets["right"];
  return mesh;
}

}  // namespace hydroweld
