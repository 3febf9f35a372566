#pragma once

#include <utility>

namespace hydroweld {

/// Plane-strain mode I Williams displacements (u_x, u_y) at polar position
/// (r, theta) around the tip for stress intensity K [MPa sqrt(mm)].
std::pair<double, double> williams_displacements(double K, double r, double theta, double E, double nu);

/// J = K^2 (1 - nu^2) / E [N/mm].
double j_from_k(double K, double E, double nu);
/// Inverse of j_from_k.
double k_from_j(double J, double E, double nu);
/// Irwin plastic zone estimate (1 / 3 pi) (K / sigma_y)^2 [mm].
double irwin_rp(double K, double yield);

/// Thin-wall closed-end pipe displacements (u_r, u_l) for internal pressure p.
/// u_l is the axial displacement of each lateral edge of a section of width L0.
std::pair<double, double> lame_displacements(double p, double inner_radius, double thickness, double width, double E,
                                             double nu);

/// Pressure at which the thin-wall hoop stress reaches the yield stress.
inline double yield_pressure(double yield, double thickness, double inner_radius) {
  return yield * thickness / inner_radius;
}

}  // namespace hydroweld
