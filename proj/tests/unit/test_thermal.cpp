#include "hydroweld/fem/projection.hpp"
#include "hydroweld/mesh/generators.hpp"
#include "hydroweld/thermal/thermal.hpp"

#include <doctest.h>

#include <cmath>

using namespace hydroweld;

namespace {

constexpr double kK = 0.03, kRho = 7.8e-6, kC = 500.0;

MaterialSet constant_properties(double k = kK) {
  MaterialSet mats = default_materials();
  for (Region r : kAllRegions) {
    mats[r].conductivity = PropertyTable({0.0, 2000.0}, {k, k});
    mats[r].density = PropertyTable({0.0, 2000.0}, {kRho, kRho});
    mats[r].specific_heat = PropertyTable({0.0, 2000.0}, {kC, kC});
  }
  return mats;
}

// Slab 0 < x < L at T0, both faces held at T1 from t = 0.
double slab_series(double x, double t, double L, double kappa, double T0, double T1) {
  double s = 0.0;
  for (int n = 1; n < 2000; n += 2) {
    const double k = n * constants::pi / L;
    s += 4.0 / (n * constants::pi) * std::sin(k * x) * std::exp(-k * k * kappa * t);
  }
  return T1 + (T0 - T1) * s;
}

}  // namespace

TEST_SUITE("thermal") {

TEST_CASE("uniform insulated field stays put") {
  const Mesh mesh = generate_rectangle_mesh(0.0, 4.0, 0.0, 2.0, 4, 2);
  const MeshGeometry geom(mesh);
  const MaterialSet mats = default_materials();
  const ThermalModel model(mesh, geom, mats);
  FieldState s = FieldState::initial(mesh, geom.points_per_element(), 321.0);
  for (double dt : {1e-3, 1.0, 1e3}) {
    const auto rep = model.step(s, {}, dt);
    CHECK(rep.converged);
    CHECK((s.temperature.array() - 321.0).abs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("transient slab matches the Fourier series") {
  const double L = 10.0, T0 = 21.0, T1 = 500.0;
  const Mesh mesh = generate_rectangle_mesh(0.0, L, 0.0, L / 100, 100, 1);
  const MeshGeometry geom(mesh);
  const MaterialSet mats = constant_properties();
  const ThermalModel model(mesh, geom, mats);
  FieldState s = FieldState::initial(mesh, geom.points_per_element(), T0);
  ThermalBC faces;
  faces.kind = ThermalBCKind::Prescribed;
  for (const char* side : {"left", "right"})
    for (int n : mesh.node_set(side)) {
      faces.nodes.push_back(n);
      faces.values.push_back(T1);
    }
  const double kappa = kK / (kRho * kC);
  const double tau = L * L / kappa;
  const double dt = 1e-4 * tau;
  int step = 0;
  for (double probe : {0.02, 0.05, 0.1}) {
    while ((step + 0.5) * dt < probe * tau) {
      const auto rep = model.step(s, {faces}, dt);
      REQUIRE(rep.converged);
      CHECK(std::abs(rep.balance_error()) < 1e-8);
      ++step;
    }
    const int mid = mesh.node_set("bottom")[50];
    const double exact = slab_series(mesh.nodes(0, mid), s.time, L, kappa, T0, T1);
    CHECK(std::abs(s.temperature(mid) - exact) < 0.01 * (T1 - T0));
  }
}

TEST_CASE("initial radiative cooling rate") {
  const Mesh mesh = generate_rectangle_mesh(0.0, 1.0, 0.0, 1.0, 1, 1);
  const MeshGeometry geom(mesh);
  const MaterialSet mats = constant_properties(1e-12);
  const ThermalModel model(mesh, geom, mats);
  FieldState s = FieldState::initial(mesh, geom.points_per_element(), 500.0);
  ThermalBC rad;
  rad.kind = ThermalBCKind::Radiation;
  rad.edges = {BoundaryEdge{0, 1}};
  const double dt = 1e-5;
  REQUIRE(model.step(s, {rad}, dt, 1.0, 1e-14).converged);
  const double a = 500.0 + 273.0, b = 21.0 + 273.0;
  const double q = 0.8 * 5.67e-14 * (a * a * a * a - b * b * b * b);
  const double area = 0.5, volume = 0.25;  // lumped share of the node
  const double expected = -q * area / (kRho * kC * volume);
  const int node = 1;  // (1, 0), on the radiating edge
  CHECK((s.temperature(node) - 500.0) / dt == doctest::Approx(expected).epsilon(1e-6));
  CHECK(s.temperature(0) == doctest::Approx(500.0).epsilon(1e-12));
}

TEST_CASE("one-bead weld without losses ends at the mixing temperature") {
  PipeWeldGeometry g;
  g.n_beads = 1;
  g.length = 40.0;
  const Mesh mesh = generate_pipe_weld_mesh(g, {1.0, 3.0, 1.4, 1, 3.0, 2.0});
  const MeshGeometry geom(mesh);
  const MaterialSet mats = constant_properties();
  const ThermalModel model(mesh, geom, mats);
  FieldState s = FieldState::initial(mesh, geom.points_per_element(), 21.0, false);
  TorchSchedule sch;
  sch.final_uniform = true;
  sch.final_tolerance = 0.5;
  sch.dt_max = 50.0;
  SurfaceExchange ex;
  ex.enabled = false;
  double mixing = 0.0;
  bool reached_melt = false;
  const auto res = run_torch_protocol(model, s, sch, ex, {}, [&](TorchEvent ev, int, const FieldState& st) {
    if (ev == TorchEvent::HoldEnd) {
      for (int n : mesh.node_set("cavity_edge_bead_1")) reached_melt |= std::abs(st.temperature(n) - 1500.0) < 1e-6;
    }
    if (ev != TorchEvent::Activated) return;
    const Eigen::VectorXd w = fem::lumped_weights(geom, st.active);
    mixing = w.dot(st.temperature) / w.sum();
  });
  CHECK(reached_melt);
  CHECK(res.pass_end_times.size() == 1);
  const Eigen::VectorXd w = fem::lumped_weights(geom, s.active);
  const double mean = w.dot(s.temperature) / w.sum();
  CHECK(mean == doctest::Approx(mixing).epsilon(0.01));
  CHECK(s.temperature.maxCoeff() - s.temperature.minCoeff() < 1.0);
}

}  // TEST_SUITE
