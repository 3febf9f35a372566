#pragma once

#include "hydroweld/mesh/mesh.hpp"

namespace hydroweld {

/// Element-size controls for the pipe/weld cross-section.
struct RefinementSpec {
  double h_min = 0.1;        ///< size in the groove, HAZ band and through the wall [mm]
  double h_max = 1.5;        ///< size at the lateral edges [mm]
  double growth = 1.15;      ///< geometric growth ratio in the base metal
  int order = 1;             ///< 1: bilinear, 2: biquadratic
  double haz_width = 3.0;    ///< band width measured normal to the fusion line [mm]
  double root_gap = 2.0;     ///< groove width at the inner surface [mm]

  friend bool operator==(const RefinementSpec&, const RefinementSpec&) = default;
};

struct PipeWeldGeometry {
  double inner_radius = 228.0;
  double thickness = 12.0;
  double length = 120.0;      ///< modelled axial width L0 [mm]
  double weld_angle = 60.0;   ///< included groove angle [deg]
  int n_beads = 4;

  double outer_radius() const { return inner_radius + thickness; }
  /// Half-width of the groove at radius r.
  double groove_half_width(double r, double root_gap) const;

  friend bool operator==(const PipeWeldGeometry&, const PipeWeldGeometry&) = default;
};

/// Axisymmetric pipe section with a V-groove split into stacked bead sets.
///
/// Columns follow the fusion lines: the groove (WM) and an HAZ band of
/// constant normal width on each side are meshed with h_min; base-metal
/// columns grow geometrically to h_max. Rows are uniform through the wall,
/// with bead k occupying the k-th equal-height slice of the groove.
///
/// Node sets: inner_surface, outer_surface, left_edge, right_edge,
/// cavity_edge_bead_k. Node paths: fusion_left, fusion_right (inner to outer),
/// centerline. Element sets: bead_k, BM, HAZ, WM.
Mesh generate_pipe_weld_mesh(const PipeWeldGeometry& geometry, const RefinementSpec& refinement);

struct BoundaryLayerSpec {
  double outer_radius = 150.0;
  double tip_size = 0.05;      ///< element size in the uniform crack-tip patch [mm]
  double patch_ahead = 3.0;    ///< patch extent ahead of the tip [mm]
  double patch_behind = 0.5;   ///< patch extent behind the tip [mm]
  double patch_height = 1.0;   ///< patch extent normal to the crack plane [mm]
  double growth = 1.15;        ///< radial growth ratio outside the patch
  int order = 1;

  friend bool operator==(const BoundaryLayerSpec&, const BoundaryLayerSpec&) = default;
};

/// Half disk (y >= 0) centred on the crack tip. The crack face is y = 0, x < 0;
/// the ligament y = 0, x > 0 is the symmetry plane. A uniform patch of size
/// tip_size surrounds the crack path and is wrapped by radially graded rings
/// out to the rim.
///
/// Node sets: outer_rim, ligament, crack_face, crack_tip. Node path: ligament
/// (ordered from the tip outward).
Mesh generate_boundary_layer_mesh(const BoundaryLayerSpec& spec);

/// One-element-wide strip along x in [0, thickness], square elements.
/// Node sets: charging (x = 0), exit (x = thickness).
Mesh generate_strip_mesh(double thickness, int n_elem, int order = 1);

/// Uniform rectangular grid, planar or axisymmetric. Node sets: left, right,
/// bottom, top. Used by the strip generator and by verification problems.
Mesh generate_rectangle_mesh(double x0, double x1, double y0, double y1, int nx, int ny, int order = 1,
                             Kinematics kinematics = Kinematics::PlaneStrain);

}  // namespace hydroweld
