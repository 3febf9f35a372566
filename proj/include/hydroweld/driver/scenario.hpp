#pragma once

#include "hydroweld/driver/defects.hpp"
#include "hydroweld/materials/material.hpp"
#include "hydroweld/mesh/generators.hpp"
#include "hydroweld/thermal/thermal.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hydroweld {

enum class ScenarioKind : std::uint8_t { Weld, Permeation, JRCurve, Pipeline };

std::string_view kind_name(ScenarioKind k);
ScenarioKind kind_from_name(std::string_view s);

struct WeldSettings {
  TorchSchedule schedule;
  SurfaceExchange exchange;
  bool mechanics = true;
  /// Mechanics is re-solved once the max nodal temperature change since the
  /// last solve exceeds this value, and at every protocol event [degC].
  double mechanics_interval = 10.0;
  double haz_temperature = 900.0;
  /// Peak-temperature probe: distance from the fusion line and radial
  /// position as a fraction of the wall thickness.
  double probe_offset = 3.0;
  double probe_depth = 0.9;
  friend bool operator==(const WeldSettings&, const WeldSettings&) = default;
};

struct PermeationSettings {
  Region region = Region::BM;
  double thickness = 1.0;       ///< [mm]
  int elements = 100;
  double charging = 1e-6;       ///< entry concentration [wppm]
  double duration = 8.0;        ///< simulated time in units of the expected time lag
  int steps_per_lag = 400;
  bool traps = true;
  friend bool operator==(const PermeationSettings&, const PermeationSettings&) = default;
};

struct JRSettings {
  Region region = Region::BM;
  double j_max = 0.0;            ///< final applied J [N/mm]; 0 = 8 Gc0
  double max_extension = 1.0;    ///< stop once the crack has grown this far [mm]
  double j_step = 0.02;          ///< load increment as a fraction of Gc0
  double elements_per_length = 5.0;  ///< l / h in the tip patch
  bool plasticity = true;
  int max_passes = 200;
  double stagger_tolerance = 1e-4;
  friend bool operator==(const JRSettings&, const JRSettings&) = default;
};

struct PipelineSettings {
  double ramp_rate = 27e-6;      ///< hydrogen pressure rate [MPa/s]
  bool hydrogen = true;
  bool residual_stress = true;
  std::string residual_state;    ///< path of a saved weld state; empty = run the weld first
  double pressure_step = 0.5;    ///< [MPa]
  double fine_pressure_step = 0.1;
  double refine_threshold = 0.5; ///< switch to the fine step once max phi exceeds this
  double yield_pressure = 0.0;   ///< 0 = sigma_y0(BM) t / r_i
  int max_passes = 5;
  double stagger_tolerance = 1e-3;
  int max_halvings = 4;
  friend bool operator==(const PipelineSettings&, const PipelineSettings&) = default;
};

struct OutputSettings {
  bool vtk = true;
  int vtk_every = 0;             ///< write a field snapshot every n increments (0 = final only)
  std::vector<Vec2> probes;      ///< extra temperature probes (r, z) for weld runs
  friend bool operator==(const OutputSettings&, const OutputSettings&) = default;
};

struct SolverSettings {
  double newton_tolerance = 1e-8;
  int max_iterations = 30;
  int max_cuts = 8;
  double transport_tolerance = 1e-8;
  int threads = 1;
  friend bool operator==(const SolverSettings&, const SolverSettings&) = default;
};

/// Declarative description of one run.
struct Scenario {
  ScenarioKind kind = ScenarioKind::Pipeline;
  PipeWeldGeometry pipe;
  RefinementSpec refinement{0.25, 3.0, 1.25, 1, 3.0, 2.0};
  BoundaryLayerSpec boundary_layer;
  MaterialSet materials = default_materials();
  WeldSettings weld;
  PermeationSettings permeation;
  JRSettings jr;
  PipelineSettings pipeline;
  std::vector<DefectSpec> defects;
  OutputSettings outputs;
  SolverSettings solver;
  std::uint64_t seed = 42;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Run diagnostics collected by the drivers.
struct RunLog {
  std::vector<std::string> warnings;
  std::vector<std::string> convergence;
  void warn(std::string w) { warnings.push_back(std::move(w)); }
  void note(std::string s) { convergence.push_back(std::move(s)); }
};

}  // namespace hydroweld
