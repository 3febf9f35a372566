#pragma once

#include "hydroweld/mesh/state.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hydroweld {

/// End state of a weld simulation, transferable to an integrity run on the
/// same mesh.
struct ResidualState {
  std::uint64_t mesh_fingerprint = 0;
  int points_per_element = 0;
  /// Stress, plastic strain (tensor and equivalent), dislocation trap
  /// density and strain offset per quadrature point.
  std::vector<PointHistory> points;
  Eigen::VectorXd displacement;
  Eigen::VectorXd temperature;       ///< final nodal temperature [degC]
  Eigen::VectorXd peak_temperature;  ///< [degC]

  friend bool operator==(const ResidualState&, const ResidualState&) = default;
};

/// Capture the residual state of a finished weld. The history field is not
/// carried over: it is rebuilt from the transferred plastic strain on the
/// first solve of the receiving run.
ResidualState capture_residual_state(const Mesh& mesh, const FieldState& state, const Eigen::VectorXd& peak_temperature,
                                     int points_per_element);

/// Binary, exact round trip. Throws std::runtime_error on I/O errors.
void save_residual_state(const ResidualState& state, const std::string& path);
ResidualState load_residual_state(const std::string& path);

/// Copy stresses, plastic strains, trap densities, displacements and the
/// final temperature into `target` (all elements active). Throws FatalError
/// when the mesh fingerprint differs.
FieldState transfer_state(const Mesh& mesh, const ResidualState& residual, FieldState target);

}  // namespace hydroweld
