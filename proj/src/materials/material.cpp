#include "hydroweld/materials/material.hpp"

#include "hydroweld/hydrogen/traps.hpp"

#include <sstream>
#include <stdexcept>

namespace hydroweld {

namespace {

const std::vector<double> kTemps{21.0, 200.0, 400.0, 600.0, 800.0, 1000.0, 1200.0, 1500.0};
const std::vector<double> kYoungsRatio{1.0, 0.96, 0.88, 0.72, 0.45, 0.2, 0.06, 0.01};
const std::vector<double> kYieldRatio{1.0, 0.95, 0.85, 0.62, 0.30, 0.12, 0.05, 0.01};

PropertyTable ratio_table(const std::vector<double>& ratio, double room) {
  std::vector<double> v;
  for (double r : ratio) v.push_back(r * room);
  return {kTemps, v};
}

struct RegionConstants {
  double E, sy, N, Gc, strength_factor;
};

RegionConstants constants_for(Region r) {
  switch (r) {
    case Region::BM: return {190480.0, 570.0, 0.10, 90.0, 4.0};
    case Region::HAZ: return {202010.0, 598.0, 0.08, 50.0, 3.75};
    case Region::WM: return {180300.0, 688.0, 0.07, 57.0, 3.55};
  }
  throw std::logic_error("unknown region");
}

}  // namespace

std::string_view trap_name(TrapKind k) {
  switch (k) {
    case TrapKind::Dislocation: return "dislocations";
    case TrapKind::MAInterface: return "ma_interfaces";
    case TrapKind::CementiteInterface: return "fe3c_interfaces";
    case TrapKind::GrainBoundary: return "grain_boundaries";
  }
  return "?";
}

TrapKind trap_from_name(std::string_view s) {
  for (int i = 0; i < kTrapKinds; ++i)
    if (trap_name(static_cast<TrapKind>(i)) == s) return static_cast<TrapKind>(i);
  throw std::invalid_argument("unknown trap family '" + std::string(s) + "'");
}

void MaterialRegion::validate() const {
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument(std::string(region_name(region)) + ": " + what);
  };
  for (const PropertyTable* t : {&expansion, &conductivity, &specific_heat, &density, &youngs, &yield})
    if (t->empty()) fail("missing property table");
  for (const PropertyTable* t : {&expansion, &conductivity, &specific_heat, &density, &youngs, &yield})
    if (t->temperatures().front() > 21.0 || t->temperatures().back() < 1500.0)
      fail("property tables must cover [21, 1500] degC");
  if (!(poisson > 0.0 && poisson < 0.5)) fail("Poisson ratio must lie in (0, 0.5)");
  if (!(hardening_exponent > 0.0 && hardening_exponent < 1.0)) fail("hardening exponent must lie in (0, 1)");
  if (!(toughness > 0.0)) fail("toughness must be positive");
  if (!(strength > yield(21.0))) fail("strength must exceed the room-temperature yield stress");
  if (!(degradation.xi >= 0.0 && degradation.xi <= 1.0)) fail("degradation xi must lie in [0, 1]");
  if (!(degradation.eta > 0.0 && degradation.b > 0.0)) fail("degradation eta and b must be positive");
  if (!(lattice_diffusivity > 0.0 && lattice_sites > 0.0 && solubility >= 0.0 && molar_volume >= 0.0))
    fail("transport constants must be positive");
  for (double n : trap_density)
    if (!(n > 0.0)) fail("trap densities must be positive");
}

MaterialRegion default_region(Region r) {
  const auto c = constants_for(r);
  MaterialRegion m;
  m.region = r;
  m.expansion = PropertyTable(kTemps, {1.20e-5, 1.30e-5, 1.40e-5, 1.48e-5, 1.52e-5, 1.55e-5, 1.58e-5, 1.60e-5}, false);
  m.conductivity = PropertyTable(kTemps, {0.050, 0.047, 0.042, 0.037, 0.030, 0.028, 0.029, 0.030});
  m.specific_heat = PropertyTable(kTemps, {450.0, 500.0, 550.0, 620.0, 700.0, 720.0, 750.0, 800.0});
  m.density = PropertyTable({21.0, 400.0, 800.0, 1200.0, 1500.0}, {7.85e-6, 7.72e-6, 7.58e-6, 7.45e-6, 7.35e-6});
  m.youngs = ratio_table(kYoungsRatio, c.E);
  m.yield = ratio_table(kYieldRatio, c.sy);
  m.hardening_exponent = c.N;
  m.toughness = c.Gc;
  m.strength = c.strength_factor * c.sy;
  m.trap_density = literal_trap_densities(r);
  return m;
}

std::array<TrapFamily, kTrapKinds> default_trap_families() {
  return {TrapFamily{TrapKind::Dislocation, 25.0e3, true}, TrapFamily{TrapKind::MAInterface, 47.1e3, false},
          TrapFamily{TrapKind::CementiteInterface, 13.5e3, false}, TrapFamily{TrapKind::GrainBoundary, 32.0e3, false}};
}

std::array<double, kTrapKinds> literal_trap_densities(Region r) {
  // Per m^3 in the source table; 1 m^3 = 1e9 mm^3.
  switch (r) {
    case Region::BM: return {3.13e36 / 1e9, 2.56e21 / 1e9, 9.26e22 / 1e9, 9.12e21 / 1e9};
    case Region::HAZ: return {4.25e36 / 1e9, 9.87e23 / 1e9, 3.23e22 / 1e9, 1.63e20 / 1e9};
    case Region::WM: return {5.15e35 / 1e9, 9.56e21 / 1e9, 2.58e22 / 1e9, 5.50e20 / 1e9};
  }
  throw std::logic_error("unknown region");
}

double target_effective_diffusivity(Region r) {
  switch (r) {
    case Region::BM: return 2.8e-5;
    case Region::HAZ: return 2.0e-5;
    case Region::WM: return 1.7e-4;
  }
  throw std::logic_error("unknown region");
}

MaterialSet default_materials() {
  MaterialSet set;
  set.traps = default_trap_families();
  for (Region r : kAllRegions) {
    MaterialRegion m = default_region(r);
    m.trap_density[0] =
        calibrate_dislocation_density(m, set.traps, target_effective_diffusivity(r), constants::transport_temperature)
            .density;
    set[r] = m;
  }
  return set;
}

}  // namespace hydroweld
