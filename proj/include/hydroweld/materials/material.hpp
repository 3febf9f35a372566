#pragma once

#include "hydroweld/materials/property_table.hpp"
#include "hydroweld/types.hpp"

#include <array>
#include <string>

namespace hydroweld {

/// Hydrogen degradation of toughness: Gc = Gc0 [xi + (1 - xi) exp(-eta C_L^b)].
struct DegradationLaw {
  double xi = 0.12;
  double eta = 9.0;
  double b = 0.8;
  friend bool operator==(const DegradationLaw&, const DegradationLaw&) = default;
};

enum class TrapKind : std::uint8_t { Dislocation = 0, MAInterface = 1, CementiteInterface = 2, GrainBoundary = 3 };
inline constexpr int kTrapKinds = 4;
std::string_view trap_name(TrapKind k);
TrapKind trap_from_name(std::string_view s);

/// One trap type: binding energy and whether its density evolves with
/// plastic strain. Densities live on the material regions.
struct TrapFamily {
  TrapKind kind = TrapKind::Dislocation;
  double binding_energy = 0.0;  ///< W_B [J/mol]
  bool evolving = false;
  friend bool operator==(const TrapFamily&, const TrapFamily&) = default;
};

/// Properties of one weld region. Units: MPa, mm, s, degC, W, kg.
struct MaterialRegion {
  Region region = Region::BM;
  PropertyTable expansion;      ///< alpha [1/degC]
  PropertyTable conductivity;   ///< k [W/(mm degC)]
  PropertyTable specific_heat;  ///< c [J/(kg degC)]
  PropertyTable density;        ///< rho [kg/mm^3]
  PropertyTable youngs;         ///< E [MPa]
  PropertyTable yield;          ///< sigma_y0 [MPa]
  double poisson = 0.3;
  double hardening_exponent = 0.1;
  double toughness = 90.0;  ///< Gc0 [N/mm]
  double strength = 2280.0; ///< sigma_c [MPa]
  DegradationLaw degradation;
  double lattice_diffusivity = 7.2e-3;  ///< D_L [mm^2/s]
  double lattice_sites = 5.2e20;        ///< N_L [sites/mm^3]
  double molar_volume = 2000.0;         ///< V_H [mm^3/mol]
  double solubility = 0.077;            ///< s [wppm/sqrt(MPa)]
  /// Unstrained trap densities per TrapKind [sites/mm^3].
  std::array<double, kTrapKinds> trap_density{};

  /// Throws std::invalid_argument describing the first violated bound.
  void validate() const;

  friend bool operator==(const MaterialRegion&, const MaterialRegion&) = default;
};

/// Approximate temperature-dependent tables shaped after typical line-pipe
/// steel data, scaled to the region's room-temperature E and yield stress.
MaterialRegion default_region(Region r);

/// Trap binding energies: dislocations, M/A and Fe3C interfaces, grain boundaries.
std::array<TrapFamily, kTrapKinds> default_trap_families();

/// Literal trap densities per region as sites/mm^3 (dislocation entries are
/// far above the lattice site density; see calibrated_dislocation_density).
std::array<double, kTrapKinds> literal_trap_densities(Region r);

/// Target apparent diffusivities used to calibrate the dislocation traps [mm^2/s].
double target_effective_diffusivity(Region r);

/// The three regions plus the trap families and coupling constants.
struct MaterialSet {
  std::array<MaterialRegion, 3> regions;
  std::array<TrapFamily, kTrapKinds> traps;
  double taylor_quinney = 0.1;  ///< beta, stored fraction of plastic work
  bool field_dependent_length_scale = false;

  const MaterialRegion& operator[](Region r) const { return regions[static_cast<int>(r)]; }
  MaterialRegion& operator[](Region r) { return regions[static_cast<int>(r)]; }

  friend bool operator==(const MaterialSet&, const MaterialSet&) = default;
};

/// Default regions with calibrated dislocation trap densities.
MaterialSet default_materials();

}  // namespace hydroweld
