#include "hydroweld/driver/staggered.hpp"
#include "hydroweld/fracture/metrology.hpp"
#include "hydroweld/fracture/phase_field.hpp"
#include "hydroweld/materials/constitutive.hpp"
#include "hydroweld/mesh/generators.hpp"

#include <doctest.h>

#include <cmath>

using namespace hydroweld;

namespace {

std::vector<double> uniform_history(const MeshGeometry& g, double h) {
  return std::vector<double>(static_cast<std::size_t>(g.num_points()), h);
}

}  // namespace

TEST_SUITE("fracture") {

TEST_CASE("unloaded solid stays intact") {
  const Mesh mesh = generate_rectangle_mesh(0.0, 2.0, 0.0, 1.0, 10, 5);
  const MeshGeometry geom(mesh);
  const MaterialSet mats = default_materials();
  const PhaseFieldModel pf(mesh, geom, mats);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(mesh.num_nodes());
  Eigen::VectorXd phi = zero;
  pf.solve(phi, zero, uniform_history(geom, 0.0), zero, std::vector<char>(mesh.num_elements(), 1));
  CHECK(phi.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("uniform driving force gives the homogeneous solution") {
  const Mesh mesh = generate_rectangle_mesh(0.0, 3.0, 0.0, 0.3, 30, 3);
  const MeshGeometry geom(mesh);
  const MaterialSet mats = default_materials();
  const PhaseFieldModel pf(mesh, geom, mats);
  const double gc = mats[Region::BM].toughness, l = pf.length_scale(Region::BM);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(mesh.num_nodes());
  for (double H : {1.0, 50.0, 400.0}) {
    Eigen::VectorXd phi = zero;
    pf.solve(phi, zero, uniform_history(geom, H), zero, std::vector<char>(mesh.num_elements(), 1));
    const double expected = 2.0 * H * l / (gc + 2.0 * H * l);
    CHECK((phi.array() - expected).abs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("phase field respects bounds and irreversibility") {
  const Mesh mesh = generate_rectangle_mesh(0.0, 3.0, 0.0, 1.0, 30, 10);
  const MeshGeometry geom(mesh);
  const MaterialSet mats = default_materials();
  const PhaseFieldModel pf(mesh, geom, mats);
  std::vector<double> H(geom.num_points(), 0.0);
  for (Index e = 0; e < mesh.num_elements(); ++e)
    for (int q = 0; q < geom.points_per_element(); ++q)
      H[geom.point_index(e, q)] = geom.position(e, q).x() < 0.5 ? pf.broken_history(Region::BM) : 0.0;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(mesh.num_nodes());
  const std::vector<char> all(mesh.num_elements(), 1);
  Eigen::VectorXd phi = zero;
  pf.solve(phi, zero, H, zero, all);
  CHECK(phi.minCoeff() >= 0.0);
  CHECK(phi.maxCoeff() <= 1.0);
  CHECK(phi.maxCoeff() > 0.99);
  // Lower driving force afterwards: nothing heals.
  Eigen::VectorXd next = phi;
  pf.solve(next, phi, uniform_history(geom, 0.0), zero, all);
  CHECK((next - phi).minCoeff() >= 0.0);
}

TEST_CASE("hydrogen lowers the toughness seen by the phase field") {
  const Mesh mesh = generate_rectangle_mesh(0.0, 1.0, 0.0, 1.0, 2, 2);
  const MeshGeometry geom(mesh);
  const MaterialSet mats = default_materials();
  const PhaseFieldModel pf(mesh, geom, mats);
  const auto [gc0, l0] = pf.point_properties(0, 0.0);
  const auto [gc1, l1] = pf.point_properties(0, 0.5);
  CHECK(gc0 == mats[Region::BM].toughness);
  CHECK(gc1 == doctest::Approx(gc_of_hydrogen(mats[Region::BM], 0.5)));
  CHECK(l1 == doctest::Approx(l0));  // length scale fixed by the undegraded toughness
}

TEST_CASE("homogeneous bar peaks at the material strength") {
  MaterialSet mats = default_materials();
  auto& bm = mats[Region::BM];
  bm.poisson = 0.0;
  const double E = bm.youngs(21.0);
  const double l = length_scale(bm);
  const double peak_closed = 3.0 * std::sqrt(3.0) / 16.0 * std::sqrt(E * bm.toughness / l);
  CHECK(peak_closed == doctest::Approx(bm.strength).epsilon(1e-12));

  const Mesh mesh = generate_rectangle_mesh(0.0, 1.0, 0.0, 1.0, 1, 1);
  const MeshGeometry geom(mesh);
  MechanicsOptions mo;
  mo.constitutive.plasticity = false;
  const MechanicsModel mech(mesh, geom, mats, mo);
  const PhaseFieldModel pf(mesh, geom, mats);
  const CoupledSolver solver(mech, pf);
  StaggerOptions so;
  so.max_passes = 500;
  so.phase_tolerance = 1e-10;
  FieldState s = FieldState::initial(mesh, geom.points_per_element(), 21.0);
  double peak = 0.0;
  const double e_peak = std::sqrt(bm.toughness / (3.0 * l * E));
  for (int i = 1; i <= 150; ++i) {
    const double eps = 2.0 * e_peak * i / 150.0;
    DisplacementBC bc;
    bc.add_node_set(mesh.node_set("left"), 0, 0.0);
    bc.add_node_set(mesh.node_set("right"), 0, eps);
    bc.add_node_set(mesh.node_set("bottom"), 1, 0.0);
    bc.add_node_set(mesh.node_set("top"), 1, 0.0);
    solver.solve_increment(s, s.temperature, bc, nullptr, so);
    peak = std::max(peak, s.points[0].stress(0));
  }
  CHECK(peak == doctest::Approx(bm.strength).epsilon(0.02));
}

TEST_CASE("crack extension metrology") {
  const Mesh mesh = generate_rectangle_mesh(0.0, 5.0, 0.0, 0.1, 50, 1);
  const auto& path = mesh.node_path("bottom");
  Eigen::VectorXd phi = Eigen::VectorXd::Constant(mesh.num_nodes(), 0.9);
  CHECK(measure_crack_extension(mesh, phi, path) == 0.0);
  for (Index n = 0; n < mesh.num_nodes(); ++n) phi(n) = mesh.nodes(0, n) <= 2.0 + 1e-12 ? 1.0 : 0.0;
  CHECK(measure_crack_extension(mesh, phi, path) == doctest::Approx(2.0).epsilon(0.1 / 2.0));
  for (Index n = 0; n < mesh.num_nodes(); ++n) phi(n) = std::clamp(0.95 + 0.2 * (1.37 - mesh.nodes(0, n)), 0.0, 1.0);
  CHECK(std::abs(measure_crack_extension(mesh, phi, path) - 1.37) < 1e-6);
}

TEST_CASE("through-thickness detection") {
  // Wall across x: inner surface on the left, outer on the right.
  Mesh mesh = generate_rectangle_mesh(0.0, 12.0, 0.0, 6.0, 12, 6);
  mesh.node_sets["inner_surface"] = mesh.node_set("left");
  mesh.node_sets["outer_surface"] = mesh.node_set("right");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(mesh.num_elements());
  CHECK_FALSE(detect_through_thickness_elements(mesh, v, mesh.node_set("left"), mesh.node_set("right")).connected);
  for (int i = 0; i < 12; ++i) v(i + 12 * 3) = 1.0;
  const auto tt = detect_through_thickness_elements(mesh, v, mesh.node_set("left"), mesh.node_set("right"));
  CHECK(tt.connected);
  CHECK(tt.elements.size() == 12);
  v(5 + 12 * 3) = 0.5;
  CHECK_FALSE(detect_through_thickness_elements(mesh, v, mesh.node_set("left"), mesh.node_set("right")).connected);
  // Nodal form with the mesh's surface sets.
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(mesh.num_nodes());
  for (Index n = 0; n < mesh.num_nodes(); ++n)
    if (std::abs(mesh.nodes(1, n) - 3.0) < 1.5) phi(n) = 1.0;
  CHECK(detect_through_thickness(mesh, phi).connected);
}

}  // TEST_SUITE
