#pragma once

#include "hydroweld/materials/material.hpp"
#include "hydroweld/mesh/state.hpp"

#include <utility>

namespace hydroweld {

namespace mandel {
/// Identity (1, 1, 1, 0).
inline Mandel identity() { return Mandel(1.0, 1.0, 1.0, 0.0); }
inline double trace(const Mandel& a) { return a(0) + a(1) + a(2); }
inline Mandel deviator(const Mandel& a) { return a - trace(a) / 3.0 * identity(); }
/// Deviatoric projector on Mandel vectors.
Mandel4 deviatoric_projector();
/// Von Mises equivalent of a stress in Mandel form.
inline double von_mises(const Mandel& s) { return std::sqrt(1.5) * deviator(s).norm(); }
/// Maximum in-plane principal value (plane components 11, 22, 12) combined with 33.
double max_principal(const Mandel& s);
}  // namespace mandel

struct ConstitutiveOptions {
  double beta = 0.1;                   ///< Taylor-Quinney stored fraction
  bool plasticity = true;
  double reference_temperature = 21.0; ///< T0 of the thermal strain [degC]
  double return_tolerance = 1e-10;
  int max_return_iterations = 50;
};

struct ElasticModuli {
  double bulk;
  double shear;
};

/// sigma_y0(T) (1 + E(T) ep / sigma_y0(T))^N.
double yield_stress(const MaterialRegion& m, double T, double ep);
/// d sigma_y / d ep.
double hardening_modulus(const MaterialRegion& m, double T, double ep);
/// alpha(T) (T - T0) I.
Mandel thermal_strain(const MaterialRegion& m, double T, double T0);
ElasticModuli elastic_moduli(const MaterialRegion& m, double T);
/// Isotropic elasticity tensor at temperature T.
Mandel4 elasticity_tensor(const MaterialRegion& m, double T);

/// Volumetric-deviatoric split of the elastic energy: (psi_e^+, psi_e^-).
std::pair<double, double> strain_energy_split(const MaterialRegion& m, const Mandel& elastic_strain, double T);
/// Stored plastic work of the power-law hardening curve.
double plastic_energy(const MaterialRegion& m, double ep, double T);

inline double degradation_g(double phi) { return (1.0 - phi) * (1.0 - phi); }
inline double degradation_gp(double phi, double beta) { return beta * degradation_g(phi) + (1.0 - beta); }

/// Hydrogen-degraded toughness Gc(C_L) [N/mm].
double gc_of_hydrogen(const MaterialRegion& m, double lattice_hydrogen);
/// 27 E Gc / (256 sigma_c^2) with E at 21 degC and the given toughness (default Gc0).
double length_scale(const MaterialRegion& m);
double length_scale(const MaterialRegion& m, double toughness);

/// H = max(H, psi_e^+ + beta psi_p).
PointHistory update_history(PointHistory history, double psi_plus, double psi_p, double beta = 0.1);

struct StressUpdate {
  Mandel stress;
  Mandel4 tangent;
  PointHistory history;
  double psi_plus = 0.0;
  double psi_minus = 0.0;
  double psi_p = 0.0;
  bool plastic = false;
};

/// Thermo-elasto-plastic update with damage.
///
/// The trial elastic strain is eps - offset - eps_p - eps_th. J2 radial return
/// with the yield surface degraded by g_p(phi) acting on the undegraded
/// deviatoric stress; the stress is g(phi) applied to the tensile
/// volumetric and deviatoric parts only. Throws SolverFailure if the return
/// map does not converge.
StressUpdate stress_update(const MaterialRegion& m, const PointHistory& in, const Mandel& strain, double T, double phi,
                           const ConstitutiveOptions& options = {});

}  // namespace hydroweld
