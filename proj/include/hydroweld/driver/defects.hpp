#pragma once

#include "hydroweld/mesh/generators.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hydroweld {

enum class DefectType : std::uint8_t {
  Porosity,
  LackOfPenetration,
  Imperfections,
  LackOfFusionOuter,
  LackOfFusionInner,
  RootContraction,
  Undercut,
};

std::string_view defect_name(DefectType t);
DefectType defect_from_name(std::string_view s);

/// One weld defect. Which fields matter depends on the type:
///   porosity        fraction (of WM quadrature points, 0.01 = 1 %)
///   lack-of-penetration  depth h from the inner surface
///   imperfections   sizes h_i (disc diameters), optional centres
///   lack-of-fusion  depth = length along the fusion line, offset from its start
///   root-contraction  depth = void diameter at each root toe
///   undercut        depth = groove radius at the outer toe
struct DefectSpec {
  DefectType type = DefectType::Porosity;
  double depth = 0.0;                 ///< [mm]
  std::vector<double> sizes;          ///< [mm]
  std::vector<Vec2> centres;          ///< explicit imperfection centres (r, z) [mm]
  double fraction = 0.0;              ///< [-]
  double width = 0.5;                 ///< band width for lack-of-fusion defects [mm]
  double offset = 0.0;                ///< start of a lack-of-fusion band along the fusion line [mm]
  bool override_bounds = false;

  friend bool operator==(const DefectSpec&, const DefectSpec&) = default;
};

/// Throws std::invalid_argument naming the violated standard bound.
void validate_defect(const DefectSpec& spec, const PipeWeldGeometry& pipe);

/// Defect realised on a mesh: the broken quadrature points (global indices).
struct SeededDefect {
  DefectType type;
  std::vector<Index> points;
  std::string placement;  ///< human-readable geometry summary for the manifest
};

/// Mark broken quadrature points for each spec. Porosity samples WM points
/// without replacement with a seeded generator; the other types mark points
/// inside their geometric footprint (at least the point nearest to it).
/// Throws std::invalid_argument for bound violations or WM-only defects
/// placed outside the WM.
std::vector<SeededDefect> seed_defects(const Mesh& mesh, const MeshGeometry& geometry,
                                       const std::vector<DefectSpec>& specs, const PipeWeldGeometry& pipe,
                                       const RefinementSpec& refinement, std::uint64_t seed);

}  // namespace hydroweld
