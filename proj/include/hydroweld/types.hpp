#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hydroweld {

using Index = Eigen::Index;
using Vec2 = Eigen::Vector2d;

/// Symmetric second-order tensor restricted to the in-plane/hoop subspace in
/// Mandel form: (11, 22, 33, sqrt(2)*12). Direction 3 is the hoop direction
/// for axisymmetric kinematics and the out-of-plane direction for plane strain.
template <typename Scalar>
using MandelVector = Eigen::Matrix<Scalar, 4, 1>;

/// Fourth-order tensor acting on MandelVector.
template <typename Scalar>
using MandelMatrix = Eigen::Matrix<Scalar, 4, 4>;

using Mandel = MandelVector<double>;
using Mandel4 = MandelMatrix<double>;

enum class Region : std::uint8_t { BM = 0, HAZ = 1, WM = 2 };

inline constexpr std::array<Region, 3> kAllRegions{Region::BM, Region::HAZ, Region::WM};

inline std::string_view region_name(Region r) {
  switch (r) {
    case Region::BM: return "BM";
    case Region::HAZ: return "HAZ";
    case Region::WM: return "WM";
  }
  return "?";
}

inline Region region_from_name(std::string_view s) {
  if (s == "BM" || s == "bm") return Region::BM;
  if (s == "HAZ" || s == "haz") return Region::HAZ;
  if (s == "WM" || s == "wm") return Region::WM;
  throw std::invalid_argument("unknown region '" + std::string(s) + "'");
}

enum class Kinematics : std::uint8_t { PlaneStrain, Axisymmetric };

namespace constants {
inline constexpr double pi = 3.14159265358979323846;
/// Gas constant [J/(mol K)].
inline constexpr double gas_constant = 8.314;
inline constexpr double avogadro = 6.02214076e23;
/// Stefan-Boltzmann constant [W/(mm^2 K^4)].
inline constexpr double stefan_boltzmann = 5.67e-14;
/// Absolute zero on the Celsius scale as used by the radiation law.
inline constexpr double absolute_zero_celsius = -273.0;
inline constexpr double ambient_celsius = 21.0;
/// Isothermal temperature of hydrogen transport runs [K].
inline constexpr double transport_temperature = 294.15;
}  // namespace constants

/// Recoverable numerical failure (Newton stagnation, rejected step). Drivers
/// catch it and cut the increment.
struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unrecoverable condition; propagates to the CLI as exit code 2.
struct FatalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hydroweld
