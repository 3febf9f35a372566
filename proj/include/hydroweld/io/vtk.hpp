#pragma once

#include "hydroweld/materials/material.hpp"
#include "hydroweld/mesh/state.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace hydroweld::io {

/// Named fields for one legacy VTK file. Tensors are 3x3 row-major per cell.
struct VtkFields {
  std::vector<std::pair<std::string, Eigen::VectorXd>> point_scalars;
  std::vector<std::pair<std::string, Eigen::VectorXd>> cell_scalars;
  std::vector<std::pair<std::string, Eigen::Matrix<double, 9, Eigen::Dynamic>>> cell_tensors;
};

/// Legacy ASCII unstructured grid: bilinear elements as VTK_QUAD (9),
/// biquadratic as VTK_BIQUADRATIC_QUAD (28). Throws std::invalid_argument
/// when a field does not match the node or element count.
void write_vtk(std::ostream& out, const Mesh& mesh, const VtkFields& fields, const std::string& title = "hydroweld");
void write_vtk(const std::filesystem::path& path, const Mesh& mesh, const VtkFields& fields,
               const std::string& title = "hydroweld");

/// Standard output fields of a simulation state: point data T, C_L,
/// phase_field (and peak_temperature when given); cell data stress,
/// eq_plastic_strain and C_T_total as element averages.
VtkFields state_fields(const Mesh& mesh, const MeshGeometry& geometry, const FieldState& state,
                       const MaterialSet& materials, const Eigen::VectorXd* peak_temperature = nullptr);

}  // namespace hydroweld::io
