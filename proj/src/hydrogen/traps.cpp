#include "hydroweld/hydrogen/traps.hpp"

#include <cmath>
#include <stdexcept>

namespace hydroweld {

namespace {
constexpr double kIronDensity = 7.87e-6;  // kg/mm^3
constexpr double kHydrogenMolarMass = 1.008;  // g/mol
constexpr double kRho0 = 1e10;        // m^-2
constexpr double kGamma = 1e16;       // m^-2
constexpr double kLattice = 2.866e-10;  // m
constexpr double kPerCubicMetre = 1e-9;  // m^-3 -> mm^-3
}  // namespace

double sites_per_wppm() {
  // 1 wppm: 1e-6 g of H per g of Fe.
  const double grams_fe = kIronDensity * 1e3;
  return grams_fe * 1e-6 / kHydrogenMolarMass * constants::avogadro;
}

double wppm_to_sites(double c) { return c * sites_per_wppm(); }
double sites_to_wppm(double n) { return n / sites_per_wppm(); }

double trap_equilibrium_constant(double w, double T) { return std::exp(w / (constants::gas_constant * T)); }

double oriani_occupancy(double theta_L, double w, double T) {
  if (!(theta_L >= 0.0 && theta_L < 1.0)) throw std::invalid_argument("oriani_occupancy: theta_L must lie in [0, 1)");
  const double k = trap_equilibrium_constant(w, T);
  return k * theta_L / (1.0 - theta_L + k * theta_L);
}

TrapDensity geometric_dislocation_density(double ep) {
  const double e = std::max(ep, 0.0);
  const double rho = e <= 0.5 ? kRho0 + 2.0 * kGamma * e : kRho0 + kGamma;
  const double dn = e < 0.5 ? std::sqrt(2.0) * kGamma / kLattice : 0.0;
  return {std::sqrt(2.0) * rho / kLattice * kPerCubicMetre, dn * kPerCubicMetre};
}

TrapDensity trap_density_evolution(double unstrained, double ep) {
  const auto g = geometric_dislocation_density(ep);
  const auto g0 = geometric_dislocation_density(0.0);
  return {unstrained + (g.density - g0.density), g.derivative};
}

double sievert_boundary(double p, double s) {
  if (p < 0.0) throw std::invalid_argument("sievert_boundary: negative pressure");
  return s * std::sqrt(p);
}

double crack_enhanced_DL(double D_L, double phi, double k_d, double phi_th) {
  return D_L * (1.0 + (phi >= phi_th ? k_d : 0.0));
}

TrapEquilibrium trap_equilibrium(double c, const std::array<double, kTrapKinds>& n,
                                 const std::array<TrapFamily, kTrapKinds>& fam, double n_l, double T) {
  TrapEquilibrium out;
  const double kappa = sites_per_wppm();
  const double theta_l = c * kappa / n_l;
  for (int i = 0; i < kTrapKinds; ++i) {
    const double k = trap_equilibrium_constant(fam[i].binding_energy, T);
    if (theta_l <= 0.0) {
      // Linear continuation below zero keeps Newton iterates well defined.
      out.occupancy[i] = 0.0;
      out.trapped[i] = n[i] / n_l * k * c;
      out.total_trapped += out.trapped[i];
      out.dtrapped_dCL += n[i] / n_l * k;
      continue;
    }
    const double denom = 1.0 - theta_l + k * theta_l;
    out.occupancy[i] = k * theta_l / denom;
    out.trapped[i] = out.occupancy[i] * n[i] / kappa;
    out.total_trapped += out.trapped[i];
    out.dtrapped_dCL += n[i] / n_l * k / (denom * denom);
  }
  return out;
}

double dilute_effective_diffusivity(const std::array<double, kTrapKinds>& n,
                                    const std::array<TrapFamily, kTrapKinds>& fam, const MaterialRegion& region,
                                    double T) {
  double sum = 0.0;
  for (int i = 0; i < kTrapKinds; ++i)
    sum += trap_equilibrium_constant(fam[i].binding_energy, T) * n[i] / region.lattice_sites;
  return region.lattice_diffusivity / (1.0 + sum);
}

double effective_diffusivity(double c, const std::array<TrapFamily, kTrapKinds>& fam, const MaterialRegion& region,
                             double ep, double T) {
  auto n = region.trap_density;
  for (int i = 0; i < kTrapKinds; ++i)
    if (fam[i].evolving) n[i] = trap_density_evolution(n[i], ep).density;
  if (c <= 0.0) return dilute_effective_diffusivity(n, fam, region, T);
  const auto eq = trap_equilibrium(c, n, fam, region.lattice_sites, T);
  double denom = c;
  for (int i = 0; i < kTrapKinds; ++i) denom += eq.trapped[i] * (1.0 - eq.occupancy[i]);
  return region.lattice_diffusivity * c / denom;
}

TrapCalibration calibrate_dislocation_density(const MaterialRegion& region,
                                              const std::array<TrapFamily, kTrapKinds>& fam, double target,
                                              double T) {
  int evolving = -1;
  double others = 0.0;
  for (int i = 0; i < kTrapKinds; ++i) {
    if (fam[i].evolving) {
      evolving = i;
      continue;
    }
    others += trap_equilibrium_constant(fam[i].binding_energy, T) * region.trap_density[i] / region.lattice_sites;
  }
  if (evolving < 0) throw std::invalid_argument("trap calibration: no evolving trap family");
  const double k = trap_equilibrium_constant(fam[evolving].binding_energy, T);
  const double floor = geometric_dislocation_density(0.0).density;
  double density = (region.lattice_diffusivity / target - 1.0 - others) * region.lattice_sites / k;
  const bool clamped = density < floor;
  if (clamped) density = floor;
  auto n = region.trap_density;
  n[evolving] = density;
  return {density, dilute_effective_diffusivity(n, fam, region, T), clamped};
}

}  // namespace hydroweld
