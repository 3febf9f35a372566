#pragma once

#include "hydroweld/driver/residual_state.hpp"
#include "hydroweld/driver/scenario.hpp"
#include "hydroweld/fracture/metrology.hpp"

#include <functional>
#include <vector>

namespace hydroweld {

enum class FailureMode : std::uint8_t { Fracture, PlasticCollapse };
std::string_view failure_mode_name(FailureMode m);

struct PipelineIncrement {
  double pressure = 0.0;         ///< [MPa]
  double time = 0.0;             ///< [s]
  int passes = 0;
  bool converged = false;
  double max_phi = 0.0;
  double boundary_concentration = 0.0;  ///< Sievert C_L on the inner surface [wppm]
  double hydrogen_content = 0.0;        ///< lattice + trapped [wppm mm^3]
};

struct PipelineResult {
  double failure_pressure = 0.0;
  FailureMode mode = FailureMode::PlasticCollapse;
  double yield_pressure = 0.0;
  std::vector<PipelineIncrement> history;
  ThroughThickness crack;
  bool initiated = false;
  Vec2 initiation{0.0, 0.0};     ///< first node to reach phi >= 0.5 outside seeded defects
  double initiation_pressure = 0.0;
  std::vector<SeededDefect> defects;
  double transfer_equilibrium = 0.0;  ///< relative internal-force residual after state transfer
  FieldState final_state;
};

using PipelineObserver = std::function<void(const PipelineIncrement&, const FieldState&)>;

/// Pressure ramp of the welded pipe section: Lame displacements on the outer
/// surface and lateral edges, Sievert charging on the inner surface and zero
/// concentration on the outer surface. Each increment is solved by the
/// staggered scheme; the run ends with a through-thickness crack (fracture)
/// or at the yield pressure (plastic collapse).
PipelineResult run_pipeline(const Scenario& scenario, const Mesh& mesh, const ResidualState* residual, RunLog& log,
                            const PipelineObserver& observer = {});

}  // namespace hydroweld
