#pragma once

#include "hydroweld/mesh/mesh.hpp"

#include <Eigen/Core>
#include <vector>

namespace hydroweld {

inline constexpr double kCrackThreshold = 0.95;

/// Arclength from the first node of `path` to the farthest point where
/// phi >= threshold, interpolating linearly between path nodes. Zero when no
/// node qualifies.
double measure_crack_extension(const Mesh& mesh, const Eigen::VectorXd& phi, const std::vector<int>& path,
                               double threshold = kCrackThreshold);

struct ThroughThickness {
  bool connected = false;
  std::vector<int> elements;  ///< chain from the inner to the outer surface
};

/// Element-mean nodal values.
Eigen::VectorXd element_means(const Mesh& mesh, const Eigen::VectorXd& nodal);

/// Flood fill over edge-adjacent active elements whose value is >= threshold,
/// from elements with an edge on `inner` to elements with an edge on `outer`.
ThroughThickness detect_through_thickness_elements(const Mesh& mesh, const Eigen::VectorXd& element_phi,
                                                   const std::vector<int>& inner, const std::vector<int>& outer,
                                                   double threshold = kCrackThreshold,
                                                   const std::vector<char>* active = nullptr);

/// Same with a nodal phase field (element mean) and the mesh's
/// inner_surface / outer_surface node sets.
ThroughThickness detect_through_thickness(const Mesh& mesh, const Eigen::VectorXd& phi,
                                          double threshold = kCrackThreshold,
                                          const std::vector<char>* active = nullptr);

}  // namespace hydroweld
