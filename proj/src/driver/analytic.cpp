#include "hydroweld/driver/analytic.hpp"

#include "hydroweld/types.hpp"

#include <cmath>
#include <stdexcept>

namespace hydroweld {

std::pair<double, double> williams_displacements(double K, double r, double theta, double E, double nu) {
  if (!(r > 0.0)) throw std::invalid_argument("williams_displacements: r must be positive");
  const double f = K * (1.0 + nu) / E * std::sqrt(r / (2.0 * constants::pi));
  const double a = 3.0 - 4.0 * nu - std::cos(theta);
  return {f * a * std::cos(0.5 * theta), f * a * std::sin(0.5 * theta)};
}

double j_from_k(double K, double E, double nu) { return K * K * (1.0 - nu * nu) / E; }

double k_from_j(double J, double E, double nu) { return std::sqrt(J * E / (1.0 - nu * nu)); }

double irwin_rp(double K, double yield) {
  const double x = K / yield;
  return x * x / (3.0 * constants::pi);
}

std::pair<double, double> lame_displacements(double p, double ri, double t, double width, double E, double nu) {
  const double ur = p * ri * ri / (E * t) * (1.0 - 0.5 * nu);
  const double ul = p * width * ri / (2.0 * E * t) * (0.5 - nu);
  return {ur, ul};
}

}  // namespace hydroweld
