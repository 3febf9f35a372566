#include "hydroweld/fem/newton.hpp"
#include "hydroweld/fem/projection.hpp"
#include "hydroweld/fem/reference_element.hpp"
#include "hydroweld/fem/scalar_operators.hpp"
#include "hydroweld/fem/sparse_system.hpp"
#include "hydroweld/mechanics/mechanics.hpp"
#include "hydroweld/mesh/generators.hpp"

#include <doctest.h>

#include <Eigen/Dense>

using namespace hydroweld;

TEST_SUITE("fem") {

TEST_CASE("gauss rules integrate polynomials exactly") {
  for (int n = 1; n <= 4; ++n) {
    const auto g = fem::gauss_legendre(n);
    double w = 0.0, m = 0.0;
    for (int i = 0; i < n; ++i) {
      w += g.weights[i];
      m += g.weights[i] * std::pow(g.points[i], 2 * n - 2);
    }
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-13));
  }
}

TEST_CASE("shape functions form a partition of unity") {
  for (int p : {1, 2}) {
    const fem::ReferenceQuad ref(p);
    CHECK(ref.weights().sum() == doctest::Approx(4.0));
    for (int q = 0; q < ref.num_points(); ++q) {
      CHECK(ref.shape_values().col(q).sum() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(ref.shape_gradients()[q].rowwise().sum().norm() < 1e-13);
    }
    // Kronecker property at the nodes.
    Eigen::VectorXd N(ref.nodes_per_element());
    Eigen::Matrix2Xd dN(2, ref.nodes_per_element());
    for (int a = 0; a < ref.nodes_per_element(); ++a) {
      ref.evaluate(ref.node_coordinate(a), N, dN);
      for (int b = 0; b < ref.nodes_per_element(); ++b) CHECK(N(b) == doctest::Approx(a == b ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("quadrature weights sum to the element measure") {
  const Mesh mesh = generate_rectangle_mesh(0.0, 3.0, 1.0, 2.0, 3, 2, 2);
  const MeshGeometry geom(mesh);
  double v = 0.0;
  for (Index e = 0; e < mesh.num_elements(); ++e) v += geom.element_volume(e);
  CHECK(v == doctest::Approx(3.0));
  const Mesh axi = generate_rectangle_mesh(1.0, 2.0, 0.0, 1.0, 2, 2, 1, Kinematics::Axisymmetric);
  const MeshGeometry ga(axi);
  double va = 0.0;
  for (Index e = 0; e < axi.num_elements(); ++e) va += ga.element_volume(e);
  CHECK(va == doctest::Approx(constants::pi * (4.0 - 1.0)));
}

TEST_CASE("unit-square Laplacian matches the hand-computed matrix") {
  const Mesh mesh = generate_rectangle_mesh(0.0, 1.0, 0.0, 1.0, 1, 1);
  const MeshGeometry geom(mesh);
  const fem::ScalarOperators ops(geom, false);
  // Lexicographic nodes (0,0), (1,0), (0,1), (1,1).
  Eigen::Matrix4d expected;
  expected << 4, -1, -1, -2,
              -1, 4, -2, -1,
              -1, -2, 4, -1,
              -2, -1, -1, 4;
  expected /= 6.0;
  CHECK((ops.stiffness(0) - expected).norm() < 1e-14);
  CHECK(ops.lumped(0).sum() == doctest::Approx(1.0));
}

TEST_CASE("Laplacian annihilates constants after assembly") {
  const Mesh mesh = generate_rectangle_mesh(0.0, 2.0, 0.0, 1.0, 4, 3);
  const MeshGeometry geom(mesh);
  const fem::ScalarOperators ops(geom);
  const std::vector<char> active(mesh.num_elements(), 1);
  const fem::DofMap dofs(mesh.num_nodes(), 1, std::vector<char>(mesh.num_nodes(), 1),
                         std::vector<char>(mesh.num_nodes(), 0));
  fem::SparseSystem sys(mesh, active, dofs);
  fem::assemble(sys, mesh, active, [&](Index e, Eigen::MatrixXd& ke, Eigen::VectorXd&) { ke = ops.stiffness(e); });
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.num_nodes());
  CHECK((sys.matrix() * ones).norm() < 1e-12);
  const Eigen::SparseMatrix<double> t = sys.matrix().transpose();
  CHECK((Eigen::MatrixXd(sys.matrix()) - Eigen::MatrixXd(t)).norm() < 1e-14);
}

TEST_CASE("disjoint elements give a block-diagonal matrix") {
  Mesh mesh = generate_rectangle_mesh(0.0, 3.0, 0.0, 1.0, 3, 1);
  const MeshGeometry geom(mesh);
  const fem::ScalarOperators ops(geom, false);
  const std::vector<char> active{1, 0, 1};
  const auto act_nodes = active_nodes(mesh, active);
  const fem::DofMap dofs(mesh.num_nodes(), 1, act_nodes, std::vector<char>(mesh.num_nodes(), 0));
  CHECK(dofs.num_equations() == 8);
  fem::SparseSystem sys(mesh, active, dofs);
  fem::assemble(sys, mesh, active, [&](Index e, Eigen::MatrixXd& ke, Eigen::VectorXd&) { ke = ops.stiffness(e); });
  const Eigen::MatrixXd K(sys.matrix());
  std::vector<int> owner(mesh.num_nodes(), -1);
  for (Index e : {0, 2})
    for (int n : mesh.element(e)) owner[dofs.equation(n)] = static_cast<int>(e);
  for (int i = 0; i < K.rows(); ++i)
    for (int j = 0; j < K.cols(); ++j)
      if (owner[i] != owner[j]) CHECK(K(i, j) == 0.0);
}

TEST_CASE("solve_linear returns the full-length Newton correction") {
  const Mesh mesh = generate_rectangle_mesh(0.0, 1.0, 0.0, 1.0, 1, 1);
  const std::vector<char> active{1};
  std::vector<char> fixed(4, 0);
  fixed[0] = 1;
  const fem::DofMap dofs(4, 1, std::vector<char>(4, 1), fixed);
  fem::SparseSystem sys(mesh, active, dofs);
  fem::assemble(sys, mesh, active, [](Index, Eigen::MatrixXd& ke, Eigen::VectorXd& re) {
    ke.setIdentity();
    re << 5.0, 1.0, 2.0, 3.0;
  });
  const Eigen::VectorXd dx = fem::solve_linear(sys, fem::LinearSolver::Kind::SymmetricLDLT);
  CHECK(dx.size() == 4);
  CHECK(dx(0) == 0.0);
  CHECK(dx(1) == doctest::Approx(-1.0));
  CHECK(dx(3) == doctest::Approx(-3.0));
  CHECK(sys.residual()(0) == 5.0);  // reaction kept on the constrained dof
}

TEST_CASE("Newton converges in one step on a linear residual") {
  Eigen::MatrixXd A(2, 2);
  A << 3.0, 1.0, 1.0, 2.0;
  const Eigen::Vector2d b(1.0, -2.0);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  auto residual = [&](const Eigen::VectorXd& y, Eigen::VectorXd& r) {
    r = A * y - b;
    return r.norm();
  };
  auto step = [&](const Eigen::VectorXd&, const Eigen::VectorXd& r, Eigen::VectorXd& dx) {
    dx = A.ldlt().solve(-r);
  };
  const auto rep = fem::newton(residual, step, x, {});
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
  CHECK((A * x - b).norm() < 1e-12);
}

TEST_CASE("Newton reports stagnation without throwing") {
  Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 1.0);
  auto residual = [](const Eigen::VectorXd& y, Eigen::VectorXd& r) {
    r.resize(1);
    r(0) = y(0) * y(0) + 1.0;  // no real root
    return std::abs(r(0));
  };
  auto step = [](const Eigen::VectorXd& y, const Eigen::VectorXd& r, Eigen::VectorXd& dx) {
    dx.resize(1);
    dx(0) = -r(0) / (2.0 * y(0));
  };
  fem::NewtonOptions opt;
  opt.max_iterations = 5;
  const auto rep = fem::newton(residual, step, x, opt);
  CHECK_FALSE(rep.converged);
}

TEST_CASE("distorted patch reproduces a uniform strain exactly") {
  // Four bilinear elements with an off-centre interior node.
  Mesh mesh = generate_rectangle_mesh(0.0, 2.0, 0.0, 2.0, 2, 2);
  mesh.nodes.col(4) = Vec2(1.13, 0.87);
  const MeshGeometry geom(mesh);
  MaterialSet mats = default_materials();
  MechanicsOptions mo;
  mo.constitutive.plasticity = false;
  mo.bbar = false;
  const MechanicsModel mech(mesh, geom, mats, mo);
  FieldState state = FieldState::initial(mesh, geom.points_per_element(), 21.0);
  const Eigen::Matrix2d grad{{1e-3, 2e-4}, {-1e-4, -5e-4}};
  DisplacementBC bc;
  for (Index n = 0; n < mesh.num_nodes(); ++n) {
    if (n == 4) continue;
    const Vec2 u = grad * mesh.nodes.col(n);
    bc.add(2 * n, u.x());
    bc.add(2 * n + 1, u.y());
  }
  mech.solve(state, state.temperature, bc);
  const Vec2 u4 = grad * mesh.nodes.col(4);
  CHECK(state.displacement(8) == doctest::Approx(u4.x()).epsilon(1e-10));
  CHECK(state.displacement(9) == doctest::Approx(u4.y()).epsilon(1e-10));
  const Mandel s0 = state.points[0].stress;
  for (const auto& p : state.points) CHECK((p.stress - s0).norm() < 1e-8 * s0.norm());
}

TEST_CASE("projection reproduces constants and linear fields") {
  const Mesh mesh = generate_rectangle_mesh(0.0, 4.0, 0.0, 3.0, 4, 3);
  const MeshGeometry geom(mesh);
  const std::vector<char> active(mesh.num_elements(), 1);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(geom.num_points(), 2.5);
  const Eigen::VectorXd nodal = fem::project_to_nodes(geom, active, c);
  CHECK((nodal.array() - 2.5).abs().maxCoeff() < 1e-13);
  CHECK((fem::interpolate_to_points(geom, nodal) - c).mean() == doctest::Approx(0.0).epsilon(1e-14));

  Eigen::VectorXd lin(geom.num_points());
  for (Index e = 0; e < mesh.num_elements(); ++e)
    for (int q = 0; q < geom.points_per_element(); ++q) lin(geom.point_index(e, q)) = geom.position(e, q).x();
  const Eigen::VectorXd nl = fem::project_to_nodes(geom, active, lin);
  for (Index n = 0; n < mesh.num_nodes(); ++n) {
    const Vec2 x = mesh.nodes.col(n);
    if (x.x() > 0.0 && x.x() < 4.0 && x.y() > 0.0 && x.y() < 3.0) CHECK(nl(n) == doctest::Approx(x.x()));
  }
}

}  // TEST_SUITE
