#include "hydroweld/driver/permeation.hpp"
#include "hydroweld/hydrogen/transport.hpp"
#include "hydroweld/hydrogen/traps.hpp"
#include "hydroweld/mesh/generators.hpp"

#include <doctest.h>

#include <cmath>

using namespace hydroweld;

namespace {

constexpr double kT = constants::transport_temperature;

// Steady state of d(theta_T)/dt = k theta_L/(1 - theta_L) (1 - theta_T) - p theta_T, by bisection.
double kinetic_steady_state(double theta_L, double k_over_p) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double rate = k_over_p * theta_L / (1.0 - theta_L) * (1.0 - mid) - mid;
    (rate > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Scenario strip_scenario(Region r, bool traps) {
  Scenario sc;
  sc.kind = ScenarioKind::Permeation;
  sc.permeation.region = r;
  sc.permeation.traps = traps;
  return sc;
}

}  // namespace

TEST_SUITE("hydrogen") {

TEST_CASE("wppm to site density") {
  CHECK(wppm_to_sites(0.0) == 0.0);
  // rho_Fe N_A 1e-6 / M_H with rho_Fe = 7.874 g/cm^3, M_H = 1.008 g/mol.
  const double kappa = 7.874e-3 * 6.02214076e23 * 1e-6 / 1.008;
  CHECK(wppm_to_sites(1.0) == doctest::Approx(kappa).epsilon(2e-3));
  CHECK(wppm_to_sites(1.0) == doctest::Approx(4.70e15).epsilon(5e-3));
  for (double c : {1e-6, 0.3, 17.0}) CHECK(sites_to_wppm(wppm_to_sites(c)) == doctest::Approx(c).epsilon(1e-12));
}

TEST_CASE("Oriani occupancy") {
  CHECK(oriani_occupancy(0.0, 25e3, kT) == 0.0);
  CHECK(oriani_occupancy(0.3, 0.0, kT) == doctest::Approx(0.3));
  const double theta_L = wppm_to_sites(0.385) / 5.2e20;
  CHECK(theta_L == doctest::Approx(3.48e-6).epsilon(0.01));
  const double K = trap_equilibrium_constant(25e3, kT);
  CHECK(std::log(K) == doctest::Approx(10.22).epsilon(2e-3));
  CHECK(oriani_occupancy(theta_L, 25e3, kT) == doctest::Approx(kinetic_steady_state(theta_L, K)).epsilon(1e-9));
  CHECK_THROWS_AS(oriani_occupancy(1.0, 25e3, kT), std::invalid_argument);
}

TEST_CASE("effective diffusivity") {
  const auto mats = default_materials();
  MaterialRegion bare = mats[Region::BM];
  bare.trap_density.fill(0.0);
  CHECK(effective_diffusivity(0.1, mats.traps, bare, 0.0, kT) == doctest::Approx(7.2e-3));
  const auto& bm = mats[Region::BM];
  const double dilute = dilute_effective_diffusivity(bm.trap_density, mats.traps, bm, kT);
  CHECK(dilute == doctest::Approx(2.8e-5).epsilon(0.2));
  CHECK(effective_diffusivity(1e-8, mats.traps, bm, 0.0, kT) == doctest::Approx(dilute).epsilon(1e-3));
  for (double c : {1e-6, 0.1, 1.0, 10.0})
    CHECK(effective_diffusivity(c, mats.traps, bm, 0.0, kT) <= bm.lattice_diffusivity);
}

TEST_CASE("dislocation trap density law") {
  const auto n0 = geometric_dislocation_density(0.0);
  CHECK(n0.density == doctest::Approx(std::sqrt(2.0) * 1e10 / 2.866e-10 * 1e-9).epsilon(1e-3));
  CHECK(n0.density == doctest::Approx(4.93e10).epsilon(2e-3));
  const auto a = geometric_dislocation_density(0.5 - 1e-12), b = geometric_dislocation_density(0.5 + 1e-12);
  CHECK(a.density == doctest::Approx(b.density).epsilon(1e-10));
  CHECK(geometric_dislocation_density(0.7).derivative == 0.0);
  CHECK(geometric_dislocation_density(0.9).density == doctest::Approx(b.density));
  CHECK(trap_density_evolution(1e12, 0.0).density == doctest::Approx(1e12));
  for (double ep : {0.0, 0.1, 0.3, 0.6}) CHECK(trap_density_evolution(1e12, ep).density >= 1e12);
}

TEST_CASE("Sievert charging and crack-enhanced diffusivity") {
  CHECK(sievert_boundary(0.0, 0.077) == 0.0);
  CHECK(sievert_boundary(100.0, 0.077) == doctest::Approx(0.77));
  CHECK(sievert_boundary(25.0, 0.077) == doctest::Approx(0.385));
  CHECK(crack_enhanced_DL(7.2e-3, 0.0) == 7.2e-3);
  CHECK(crack_enhanced_DL(7.2e-3, 0.95) == doctest::Approx(1001 * 7.2e-3));
  CHECK(crack_enhanced_DL(7.2e-3, 0.9) == doctest::Approx(1001 * 7.2e-3));
}

TEST_CASE("trap-free strip recovers the Fickian time lag") {
  RunLog log;
  const auto res = run_permeation(strip_scenario(Region::BM, false), log);
  const double L = 1.0;
  CHECK(res.time_lag == doctest::Approx(L * L / (6.0 * 7.2e-3)).epsilon(0.02));
}

TEST_CASE("trapped strip lag matches the dilute effective diffusivity") {
  RunLog log;
  const auto res = run_permeation(strip_scenario(Region::BM, true), log);
  CHECK(res.apparent_diffusivity == doctest::Approx(res.dilute_diffusivity).epsilon(0.15));
  CHECK(res.conservation_error < 1e-8);
}

TEST_CASE("sealed domain conserves hydrogen with stress drift and trap creation") {
  const Mesh mesh = generate_rectangle_mesh(0.0, 2.0, 0.0, 1.0, 8, 4);
  const MeshGeometry geom(mesh);
  const MaterialSet mats = default_materials();
  const TransportModel model(mesh, geom, mats);
  FieldState s = FieldState::initial(mesh, geom.points_per_element(), 21.0);
  for (Index n = 0; n < mesh.num_nodes(); ++n) s.lattice_hydrogen(n) = 0.2 + 0.1 * std::sin(3.0 * mesh.nodes(0, n));
  model.update_trap_densities(s);
  Eigen::VectorXd sh(mesh.num_nodes());
  for (Index n = 0; n < mesh.num_nodes(); ++n) sh(n) = 400.0 * mesh.nodes(0, n) - 100.0 * mesh.nodes(1, n);
  for (int step = 0; step < 5; ++step) {
    const auto previous = model.dislocation_densities(s);
    for (Index p = 0; p < geom.num_points(); ++p) s.points[p].eq_plastic_strain += 0.02 * (p % 3);
    model.update_trap_densities(s);
    const double before = model.total_content(s.lattice_hydrogen, previous, s.active);
    const auto rep = model.step(s, sh, previous, 10.0, {});
    REQUIRE(rep.converged);
    CHECK(rep.content_before == doctest::Approx(before).epsilon(1e-14));
    CHECK(std::abs(rep.content_after - rep.content_before) < 1e-8 * rep.content_before);
    CHECK(model.total_content(s) == doctest::Approx(rep.content_after).epsilon(1e-12));
    // Newly created traps fill from the lattice.
    CHECK(rep.lattice_after <= rep.lattice_before * (1.0 + 1e-12));
  }
}

TEST_CASE("uniform hydrostatic stress causes no drift") {
  const Mesh mesh = generate_rectangle_mesh(0.0, 2.0, 0.0, 1.0, 6, 3);
  const MeshGeometry geom(mesh);
  const MaterialSet mats = default_materials();
  const TransportModel model(mesh, geom, mats);
  FieldState a = FieldState::initial(mesh, geom.points_per_element(), 21.0);
  for (Index n = 0; n < mesh.num_nodes(); ++n) a.lattice_hydrogen(n) = 0.1 + 0.05 * mesh.nodes(0, n);
  model.update_trap_densities(a);
  FieldState b = a;
  const auto dis = model.dislocation_densities(a);
  model.step(a, Eigen::VectorXd::Zero(mesh.num_nodes()), dis, 5.0, {});
  model.step(b, Eigen::VectorXd::Constant(mesh.num_nodes(), 800.0), dis, 5.0, {});
  CHECK((a.lattice_hydrogen - b.lattice_hydrogen).lpNorm<Eigen::Infinity>() < 1e-12);
}

}  // TEST_SUITE
