#include "hydroweld/materials/constitutive.hpp"
#include "hydroweld/materials/material.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <sstream>

using namespace hydroweld;

namespace {

MaterialRegion bm() { return default_materials()[Region::BM]; }

// Stress for a uniaxial-stress path driven by axial strain; the lateral
// strains are iterated so that the lateral stresses vanish.
Mandel uniaxial(const MaterialRegion& m, PointHistory& h, double e11, Mandel& strain) {
  strain(0) = e11;
  StressUpdate up;
  for (int it = 0; it < 50; ++it) {
    up = stress_update(m, h, strain, 21.0, 0.0);
    const Eigen::Matrix2d k = up.tangent.block<2, 2>(1, 1);
    const Eigen::Vector2d r(up.stress(1), up.stress(2));
    if (r.norm() < 1e-9) break;
    strain.segment<2>(1) -= k.ldlt().solve(r);
  }
  h = up.history;
  return up.stress;
}

}  // namespace

TEST_SUITE("materials") {

TEST_CASE("property table lookup") {
  const PropertyTable t({20.0, 100.0, 400.0}, {10.0, 20.0, 5.0});
  CHECK(lookup(t, 100.0) == 20.0);
  CHECK(lookup(t, 60.0) == doctest::Approx(15.0));
  CHECK(lookup(t, -50.0) == 10.0);
  CHECK(lookup(t, 900.0) == 5.0);
  CHECK(t.integral(20.0, 100.0) == doctest::Approx(1200.0));
  CHECK_THROWS_AS(PropertyTable({1.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(PropertyTable({1.0, 1.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(PropertyTable({1.0, 2.0}, {1.0, -2.0}), std::invalid_argument);
  CHECK_NOTHROW(PropertyTable({1.0, 2.0}, {1.0, -2.0}, false));
  std::stringstream csv;
  t.write_csv(csv, "degC,MPa");
  CHECK(PropertyTable::read_csv(csv) == t);
  CHECK(bm().youngs(21.0) == doctest::Approx(190480.0));
}

TEST_CASE("room-temperature region constants") {
  const auto mats = default_materials();
  CHECK(mats[Region::BM].yield(21.0) == doctest::Approx(570.0));
  CHECK(mats[Region::WM].yield(21.0) == doctest::Approx(688.0));
  CHECK(mats[Region::HAZ].yield(21.0) == doctest::Approx(598.0));
  for (Region r : kAllRegions) CHECK_NOTHROW(mats[r].validate());
  MaterialRegion bad = bm();
  bad.poisson = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = bm();
  bad.strength = 500.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("hardening law") {
  const auto m = bm();
  CHECK(yield_stress(m, 21.0, 0.0) == doctest::Approx(570.0));
  CHECK(yield_stress(m, 21.0, 0.05) == doctest::Approx(570.0 * std::pow(1.0 + 190480.0 * 0.05 / 570.0, 0.1)));
  const double d = 1e-7;
  CHECK(hardening_modulus(m, 21.0, 0.01) ==
        doctest::Approx((yield_stress(m, 21.0, 0.01 + d) - yield_stress(m, 21.0, 0.01 - d)) / (2 * d)).epsilon(1e-6));
}

TEST_CASE("thermal strain") {
  MaterialRegion m = bm();
  m.expansion = PropertyTable({0.0, 2000.0}, {1.2e-5, 1.2e-5}, false);
  CHECK(thermal_strain(m, 21.0, 21.0).norm() == 0.0);
  const Mandel e = thermal_strain(m, 121.0, 21.0);
  CHECK(e(0) == doctest::Approx(1.2e-3));
  CHECK(e(2) == doctest::Approx(1.2e-3));
  CHECK(e(3) == 0.0);
}

TEST_CASE("elastic update is exact Hooke's law") {
  const auto m = bm();
  const Mandel eps(1e-4, -2e-4, 5e-5, 3e-4);
  const auto up = stress_update(m, {}, eps, 21.0, 0.0);
  CHECK_FALSE(up.plastic);
  const Mandel expected = elasticity_tensor(m, 21.0) * (eps - thermal_strain(m, 21.0, 21.0));
  CHECK((up.stress - expected).norm() < 1e-10 * expected.norm());
}

TEST_CASE("uniaxial plastic response follows the hardening law") {
  const auto m = bm();
  const double E = m.youngs(21.0);
  PointHistory h;
  Mandel strain = Mandel::Zero();
  double worst = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double e = 0.0001 * i * i / 4.0;
    const Mandel s = uniaxial(m, h, e, strain);
    if (h.eq_plastic_strain <= 0.0) continue;
    // Post-yield: sigma = sigma_y(ep), with ep = e - sigma / E.
    const double sigma = s(0);
    const double ep = e - sigma / E;
    worst = std::max(worst, std::abs(sigma - yield_stress(m, 21.0, ep)) / sigma);
    CHECK(h.eq_plastic_strain == doctest::Approx(ep).epsilon(1e-3));
  }
  CHECK(worst < 5e-3);
}

TEST_CASE("consistent tangent matches finite differences") {
  const auto m = bm();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    PointHistory h;
    h.eq_plastic_strain = 0.01 * (trial % 3);
    Mandel eps;
    for (int i = 0; i < 4; ++i) eps(i) = 0.006 * u(rng);
    const double phi = 0.1 * (trial % 4);
    const auto up = stress_update(m, h, eps, 21.0, phi);
    Mandel4 fd;
    const double d = 1e-8;
    for (int j = 0; j < 4; ++j) {
      Mandel a = eps, b = eps;
      a(j) += d;
      b(j) -= d;
      fd.col(j) = (stress_update(m, h, a, 21.0, phi).stress - stress_update(m, h, b, 21.0, phi).stress) / (2 * d);
    }
    CHECK((up.tangent - fd).norm() / fd.norm() < 1e-4);
  }
}

TEST_CASE("damage degrades tension only") {
  const auto m = bm();
  const Mandel tension(1e-3, 1e-3, 1e-3, 0.0);
  const auto t = stress_update(m, {}, tension, 21.0, 1.0);
  CHECK(t.stress.norm() < 1e-12);
  const auto c0 = stress_update(m, {}, -tension, 21.0, 0.0);
  const auto c1 = stress_update(m, {}, -tension, 21.0, 1.0);
  CHECK((c1.stress - c0.stress).norm() < 1e-9 * c0.stress.norm());
}

TEST_CASE("energy split") {
  const auto m = bm();
  const double G = elastic_moduli(m, 21.0).shear;
  const auto [p1, n1] = strain_energy_split(m, Mandel(-1e-3, -1e-3, -1e-3, 0.0), 21.0);
  CHECK(p1 == 0.0);
  CHECK(n1 > 0.0);
  const double gamma = 2e-3;  // engineering shear
  const Mandel shear(0.0, 0.0, 0.0, gamma / std::sqrt(2.0));
  const auto [p2, n2] = strain_energy_split(m, shear, 21.0);
  CHECK(n2 == 0.0);
  CHECK(p2 == doctest::Approx(G * gamma * gamma / 2.0));
  CHECK(p2 == doctest::Approx(0.5 * shear.dot(elasticity_tensor(m, 21.0) * shear)));
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1e-3, 1e-3);
  for (int i = 0; i < 20; ++i) {
    const Mandel e(u(rng), u(rng), u(rng), u(rng));
    const auto [p, n] = strain_energy_split(m, e, 21.0);
    CHECK(p + n == doctest::Approx(0.5 * e.dot(elasticity_tensor(m, 21.0) * e)).epsilon(1e-12));
  }
}

TEST_CASE("stored plastic energy") {
  const auto m = bm();
  CHECK(plastic_energy(m, 0.0, 21.0) == 0.0);
  const double d = 1e-7;
  CHECK((plastic_energy(m, 0.02 + d, 21.0) - plastic_energy(m, 0.02 - d, 21.0)) / (2 * d) ==
        doctest::Approx(yield_stress(m, 21.0, 0.02)).epsilon(1e-6));
  double w = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i)
    w += 0.5 * 0.1 / n * (yield_stress(m, 21.0, 0.1 * i / n) + yield_stress(m, 21.0, 0.1 * (i + 1) / n));
  CHECK(plastic_energy(m, 0.1, 21.0) == doctest::Approx(w).epsilon(1e-3));
}

TEST_CASE("degradation functions") {
  CHECK(degradation_g(0.0) == 1.0);
  CHECK(degradation_g(1.0) == 0.0);
  CHECK(degradation_gp(1.0, 0.1) == doctest::Approx(0.9));
  for (double phi : {0.0, 0.3, 0.7, 1.0}) CHECK(degradation_gp(phi, 0.0) == 1.0);
}

TEST_CASE("hydrogen-degraded toughness") {
  const auto m = bm();
  CHECK(gc_of_hydrogen(m, 0.0) == m.toughness);
  CHECK(gc_of_hydrogen(m, 1e9) == doctest::Approx(0.12 * m.toughness));
  const double f = gc_of_hydrogen(m, 0.385) / m.toughness;
  CHECK(f == doctest::Approx(0.12 + 0.88 * std::exp(-9.0 * std::pow(0.385, 0.8))).epsilon(1e-12));
  CHECK(f == doctest::Approx(0.133).epsilon(0.05));
}

TEST_CASE("phase-field length scales") {
  const auto mats = default_materials();
  CHECK(length_scale(mats[Region::BM]) == doctest::Approx(0.348).epsilon(5e-3));
  CHECK(length_scale(mats[Region::HAZ]) == doctest::Approx(0.212).epsilon(5e-3));
  CHECK(length_scale(mats[Region::WM]) == doctest::Approx(0.182).epsilon(5e-3));
}

TEST_CASE("history field") {
  PointHistory h;
  h.history = 5.0;
  CHECK(update_history(h, 3.0, 0.0).history == 5.0);
  h.history = 0.0;
  CHECK(update_history(h, 3.0, 10.0).history == doctest::Approx(4.0));
  // Load, then unload: H keeps the peak.
  const auto m = bm();
  PointHistory p;
  double peak = 0.0;
  for (double e : {1e-3, 2e-3, 3e-3, 2e-3, 1e-3, 0.0}) {
    p = stress_update(m, p, Mandel(e, 0.0, 0.0, 0.0), 21.0, 0.0).history;
    CHECK(p.history >= peak);
    peak = p.history;
  }
}

}  // TEST_SUITE
