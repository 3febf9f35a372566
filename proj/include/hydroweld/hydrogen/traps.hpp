#pragma once

#include "hydroweld/materials/material.hpp"

#include <array>

namespace hydroweld {

/// Lattice hydrogen sites per wppm in iron: rho_Fe N_A 1e-6 / M_H [sites/mm^3].
double sites_per_wppm();
double wppm_to_sites(double c);
double sites_to_wppm(double n);

/// Fermi-Dirac trap occupancy at local equilibrium with the lattice,
/// theta_T / (1 - theta_T) = theta_L / (1 - theta_L) exp(W_B / RT).
/// Throws std::invalid_argument for theta_L outside [0, 1).
double oriani_occupancy(double theta_L, double binding_energy, double temperature);
/// Equilibrium constant exp(W_B / RT).
double trap_equilibrium_constant(double binding_energy, double temperature);

/// Dislocation trap density and its plastic-strain derivative [sites/mm^3].
struct TrapDensity {
  double density;
  double derivative;
};
/// Geometric density sqrt(2) rho / d from the piecewise-linear dislocation
/// density law (saturating at ep = 0.5). Absolute values, no calibration.
TrapDensity geometric_dislocation_density(double ep);
/// Evolution used in the transport model: the region's unstrained
/// (calibrated) density plus the strain-induced increase of the geometric law.
TrapDensity trap_density_evolution(double unstrained, double ep);
inline TrapDensity trap_density_evolution(double ep) { return geometric_dislocation_density(ep); }

/// Sievert surface concentration s sqrt(p) [wppm].
double sievert_boundary(double pressure, double solubility);

/// D_L [1 + k_d H(phi - phi_th)] with H(0) = 1.
double crack_enhanced_DL(double D_L, double phi, double k_d = 1000.0, double phi_th = 0.9);

/// Trapped concentrations for given lattice hydrogen and per-family trap densities.
struct TrapEquilibrium {
  std::array<double, kTrapKinds> occupancy{};  ///< theta_T
  std::array<double, kTrapKinds> trapped{};    ///< C_T [wppm]
  double total_trapped = 0.0;                  ///< sum C_T [wppm]
  double dtrapped_dCL = 0.0;                   ///< d(sum C_T)/dC_L
};
TrapEquilibrium trap_equilibrium(double lattice_hydrogen, const std::array<double, kTrapKinds>& densities,
                                 const std::array<TrapFamily, kTrapKinds>& families, double lattice_sites,
                                 double temperature);

/// D_e = D_L C_L / (C_L + sum C_T (1 - theta_T)); the dilute limit at C_L = 0.
/// The dislocation density follows trap_density_evolution at ep.
double effective_diffusivity(double lattice_hydrogen, const std::array<TrapFamily, kTrapKinds>& families,
                             const MaterialRegion& region, double ep, double temperature);
/// D_L / (1 + sum K_i N_i / N_L).
double dilute_effective_diffusivity(const std::array<double, kTrapKinds>& densities,
                                    const std::array<TrapFamily, kTrapKinds>& families, const MaterialRegion& region,
                                    double temperature);

struct TrapCalibration {
  double density;         ///< calibrated unstrained dislocation density [sites/mm^3]
  double achieved;        ///< resulting dilute D_e [mm^2/s]
  bool clamped;           ///< target unreachable; density held at the geometric floor
};
/// Dislocation density that makes the dilute D_e of the region match the
/// target, keeping the other families literal. Clamped to the geometric
/// unstrained density when the other families alone already retard more.
TrapCalibration calibrate_dislocation_density(const MaterialRegion& region,
                                              const std::array<TrapFamily, kTrapKinds>& families, double target,
                                              double temperature);

}  // namespace hydroweld
