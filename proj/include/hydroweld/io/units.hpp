#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hydroweld::io {

/// Physical dimensions that appear in scenario files. Each has one
/// canonical unit (the internal mm / MPa / s / degC / W / kg system).
enum class Dimension : std::uint8_t {
  Dimensionless,
  Length,            // mm
  Stress,            // MPa
  Time,              // s
  Temperature,       // degC (absolute)
  TemperatureChange, // degC
  Angle,             // deg
  Toughness,         // N/mm
  Diffusivity,       // mm^2/s
  Concentration,     // wppm
  SiteDensity,       // 1/mm^3
  MolarEnergy,       // J/mol
  MolarVolume,       // mm^3/mol
  Solubility,        // wppm/MPa^0.5
  StressRate,        // MPa/s
  Conductivity,      // W/(mm K)
  FilmCoefficient,   // W/(mm^2 K)
  SpecificHeat,      // J/(kg K)
  MassDensity,       // kg/mm^3
  Expansion,         // 1/K
  DegradationRate,   // wppm^-b
};

std::string_view dimension_name(Dimension d);
std::string_view canonical_unit(Dimension d);

/// Convert `value` given in `unit` to the canonical unit of `d`. An empty
/// unit is accepted only for dimensionless quantities. Throws
/// std::invalid_argument for unknown units or a dimension mismatch.
double to_canonical(double value, std::string_view unit, Dimension d);

}  // namespace hydroweld::io
