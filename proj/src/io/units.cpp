#include "hydroweld/io/units.hpp"

#include <array>
#include <stdexcept>

namespace hydroweld::io {

namespace {

struct UnitDef {
  std::string_view symbol;
  Dimension dim;
  double factor;
  double offset = 0.0;  // canonical = factor * value + offset
};

// First entry of each dimension is its canonical unit.
constexpr std::array kUnits{
    UnitDef{"-", Dimension::Dimensionless, 1.0},
    UnitDef{"%", Dimension::Dimensionless, 0.01},
    UnitDef{"mm", Dimension::Length, 1.0},
    UnitDef{"um", Dimension::Length, 1e-3},
    UnitDef{"cm", Dimension::Length, 10.0},
    UnitDef{"m", Dimension::Length, 1e3},
    UnitDef{"MPa", Dimension::Stress, 1.0},
    UnitDef{"N/mm^2", Dimension::Stress, 1.0},
    UnitDef{"Pa", Dimension::Stress, 1e-6},
    UnitDef{"kPa", Dimension::Stress, 1e-3},
    UnitDef{"bar", Dimension::Stress, 0.1},
    UnitDef{"GPa", Dimension::Stress, 1e3},
    UnitDef{"s", Dimension::Time, 1.0},
    UnitDef{"ms", Dimension::Time, 1e-3},
    UnitDef{"min", Dimension::Time, 60.0},
    UnitDef{"h", Dimension::Time, 3600.0},
    UnitDef{"degC", Dimension::Temperature, 1.0},
    UnitDef{"K", Dimension::Temperature, 1.0, -273.15},
    UnitDef{"degC", Dimension::TemperatureChange, 1.0},
    UnitDef{"K", Dimension::TemperatureChange, 1.0},
    UnitDef{"deg", Dimension::Angle, 1.0},
    UnitDef{"rad", Dimension::Angle, 57.29577951308232},
    UnitDef{"N/mm", Dimension::Toughness, 1.0},
    UnitDef{"kJ/m^2", Dimension::Toughness, 1.0},
    UnitDef{"J/m^2", Dimension::Toughness, 1e-3},
    UnitDef{"mm^2/s", Dimension::Diffusivity, 1.0},
    UnitDef{"m^2/s", Dimension::Diffusivity, 1e6},
    UnitDef{"wppm", Dimension::Concentration, 1.0},
    UnitDef{"1/mm^3", Dimension::SiteDensity, 1.0},
    UnitDef{"sites/mm^3", Dimension::SiteDensity, 1.0},
    UnitDef{"1/m^3", Dimension::SiteDensity, 1e-9},
    UnitDef{"sites/m^3", Dimension::SiteDensity, 1e-9},
    UnitDef{"J/mol", Dimension::MolarEnergy, 1.0},
    UnitDef{"kJ/mol", Dimension::MolarEnergy, 1e3},
    UnitDef{"mm^3/mol", Dimension::MolarVolume, 1.0},
    UnitDef{"cm^3/mol", Dimension::MolarVolume, 1e3},
    UnitDef{"m^3/mol", Dimension::MolarVolume, 1e9},
    UnitDef{"wppm/MPa^0.5", Dimension::Solubility, 1.0},
    UnitDef{"MPa/s", Dimension::StressRate, 1.0},
    UnitDef{"Pa/s", Dimension::StressRate, 1e-6},
    UnitDef{"MPa/h", Dimension::StressRate, 1.0 / 3600.0},
    UnitDef{"W/mm/K", Dimension::Conductivity, 1.0},
    UnitDef{"W/m/K", Dimension::Conductivity, 1e-3},
    UnitDef{"W/mm^2/K", Dimension::FilmCoefficient, 1.0},
    UnitDef{"W/m^2/K", Dimension::FilmCoefficient, 1e-6},
    UnitDef{"J/kg/K", Dimension::SpecificHeat, 1.0},
    UnitDef{"kg/mm^3", Dimension::MassDensity, 1.0},
    UnitDef{"kg/m^3", Dimension::MassDensity, 1e-9},
    UnitDef{"1/K", Dimension::Expansion, 1.0},
    UnitDef{"1/degC", Dimension::Expansion, 1.0},
    UnitDef{"wppm^-b", Dimension::DegradationRate, 1.0},
};

}  // namespace

std::string_view dimension_name(Dimension d) {
  switch (d) {
    case Dimension::Dimensionless: return "dimensionless";
    case Dimension::Length: return "length";
    case Dimension::Stress: return "stress";
    case Dimension::Time: return "time";
    case Dimension::Temperature: return "temperature";
    case Dimension::TemperatureChange: return "temperature difference";
    case Dimension::Angle: return "angle";
    case Dimension::Toughness: return "fracture energy";
    case Dimension::Diffusivity: return "diffusivity";
    case Dimension::Concentration: return "concentration";
    case Dimension::SiteDensity: return "site density";
    case Dimension::MolarEnergy: return "molar energy";
    case Dimension::MolarVolume: return "molar volume";
    case Dimension::Solubility: return "solubility";
    case Dimension::StressRate: return "stress rate";
    case Dimension::Conductivity: return "thermal conductivity";
    case Dimension::FilmCoefficient: return "film coefficient";
    case Dimension::SpecificHeat: return "specific heat";
    case Dimension::MassDensity: return "mass density";
    case Dimension::Expansion: return "thermal expansion";
    case Dimension::DegradationRate: return "degradation rate";
  }
  return "?";
}

std::string_view canonical_unit(Dimension d) {
  for (const auto& u : kUnits)
    if (u.dim == d) return u.symbol;
  return "";
}

double to_canonical(double value, std::string_view unit, Dimension d) {
  if (unit.empty()) {
    if (d == Dimension::Dimensionless) return value;
    throw std::invalid_argument("missing unit for a " + std::string(dimension_name(d)) + " value (expected e.g. '" +
                                std::string(canonical_unit(d)) + "')");
  }
  bool known = false;
  for (const auto& u : kUnits) {
    if (u.symbol != unit) continue;
    known = true;
    if (u.dim == d) return u.factor * value + u.offset;
  }
  if (!known) throw std::invalid_argument("unknown unit '" + std::string(unit) + "'");
  throw std::invalid_argument("unit '" + std::string(unit) + "' is not a " + std::string(dimension_name(d)) +
                              " unit (expected e.g. '" + std::string(canonical_unit(d)) + "')");
}

}  // namespace hydroweld::io
