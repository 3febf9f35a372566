#pragma once

#include "hydroweld/fem/scalar_operators.hpp"
#include "hydroweld/materials/material.hpp"
#include "hydroweld/mesh/state.hpp"

#include <functional>
#include <vector>

namespace hydroweld {

/// Volumetric enthalpy e(T) = integral of rho(T) c(T) from 21 degC [J/mm^3],
/// exact for piecewise-linear rho and c.
class EnthalpyTable {
 public:
  EnthalpyTable() = default;
  explicit EnthalpyTable(const MaterialRegion& m);
  double operator()(double T) const;
  /// rho(T) c(T).
  double capacity(double T) const;

 private:
  PropertyTable rho_, c_;
  std::vector<double> knots_, cumulative_;
  double segment(double a, double b) const;
};

enum class ThermalBCKind { Prescribed, Convection, Radiation, Combined };

/// Surface heat exchange on edges (convection and/or radiation) or a
/// prescribed temperature on nodes.
struct ThermalBC {
  ThermalBCKind kind = ThermalBCKind::Combined;
  std::vector<BoundaryEdge> edges;   ///< convection / radiation surface
  std::vector<int> nodes;            ///< prescribed nodes
  std::vector<double> values;        ///< prescribed temperatures [degC]
  double film = 25e-6;               ///< h_c [W/(mm^2 degC)]
  double ambient = 21.0;             ///< T0 [degC]
  double emissivity = 0.8;
  double stefan_boltzmann = constants::stefan_boltzmann;
  double absolute_zero = constants::absolute_zero_celsius;

  /// Outward flux density q(T) [W/mm^2] and dq/dT.
  double flux(double T) const;
  double flux_derivative(double T) const;
};

struct HeatStepReport {
  bool converged = false;
  int iterations = 0;
  double content_change = 0.0;  ///< change of heat content of the active body [J]
  double boundary_loss = 0.0;   ///< energy leaving through exchange surfaces during the step [J]
  double injected = 0.0;        ///< energy supplied through prescribed nodes [J]
  double max_change = 0.0;      ///< max |dT| over active nodes
  /// content_change + boundary_loss - injected, relative to the largest term.
  double balance_error() const;
};

/// Thermal model shared by the step solver and the torch protocol.
class ThermalModel {
 public:
  ThermalModel(const Mesh& mesh, const MeshGeometry& geometry, const MaterialSet& materials);

  const Mesh& mesh() const { return *mesh_; }
  const MeshGeometry& geometry() const { return *geometry_; }
  /// Total heat content of the active elements [J].
  double heat_content(const FieldState& state) const;
  double heat_content(const FieldState& state, const std::vector<char>& elements) const;
  const EnthalpyTable& enthalpy(Region r) const { return enthalpy_[static_cast<int>(r)]; }
  const fem::ScalarOperators& operators() const { return ops_; }

  /// One implicit theta-step (theta = 1: backward Euler) of the heat
  /// equation on the active elements. On success state.temperature and
  /// state.time are advanced; otherwise the state is left untouched.
  HeatStepReport step(FieldState& state, const std::vector<ThermalBC>& bcs, double dt, double theta = 1.0,
                      double tolerance = 1e-8) const;

 private:
  const Mesh* mesh_;
  const MeshGeometry* geometry_;
  const MaterialSet* materials_;
  fem::ScalarOperators ops_;
  std::array<EnthalpyTable, 3> enthalpy_;
};

/// Free-function form of ThermalModel::step.
HeatStepReport solve_heat_step(const ThermalModel& model, FieldState& state, const std::vector<ThermalBC>& bcs,
                               double dt, double theta = 1.0);

/// Torch steps per bead.
struct TorchSchedule {
  double apply_duration = 8.0;
  double hold_duration = 4.0;
  double pause_duration = 1e-7;
  double melt_temperature = 1500.0;
  double interpass_temperature = 125.0;
  double final_temperature = 21.0;
  /// Cool-down of the last pass ends within this margin of final_temperature.
  double final_tolerance = 1.0;
  /// When set, the last cool-down ends once max - min T over the body is below
  /// final_tolerance instead (used with losses disabled).
  bool final_uniform = false;
  double cooldown_cap = 1e5;
  double dt_min = 1e-3;
  double dt_max = 5.0;
  double dt_initial = 0.05;
  /// Target max nodal temperature change per step [degC].
  double target_change = 25.0;
  int max_halvings = 10;

  friend bool operator==(const TorchSchedule&, const TorchSchedule&) = default;
};

struct SurfaceExchange {
  bool enabled = true;
  double film = 25e-6;
  double emissivity = 0.8;
  double ambient = 21.0;
  friend bool operator==(const SurfaceExchange&, const SurfaceExchange&) = default;
};

enum class TorchEvent { Step, ApplyEnd, HoldEnd, Activated, PassEnd };

struct TorchProbe {
  Vec2 position;
  int node = -1;
  std::vector<double> pass_peak;  ///< peak temperature during each pass
};

struct TorchResult {
  Eigen::VectorXd peak_temperature;
  std::vector<TorchProbe> probes;
  std::vector<double> times;
  std::vector<std::vector<double>> probe_series;  ///< per probe, aligned with times
  std::vector<int> sensor_nodes;
  std::vector<double> pass_end_times;
  int steps = 0;
  int rejected = 0;
};

/// Callback after each accepted step and at protocol events; bead is 1-based.
using TorchObserver = std::function<void(TorchEvent event, int bead, const FieldState& state)>;

/// Multi-pass torch protocol. For each bead: ramp the cavity-edge nodes
/// linearly from their current temperature to the melting temperature over
/// the apply duration, hold, activate the bead at the melting temperature
/// during the pause, then cool until the sensor node (nearest node to the
/// bead centroid) reaches the inter-pass temperature (last pass: final
/// temperature). Exchange acts on free edges of the active body except the
/// lateral edges. Throws FatalError when cooling exceeds the cap or the step
/// cannot be reduced further.
TorchResult run_torch_protocol(const ThermalModel& model, FieldState& state, const TorchSchedule& schedule,
                               const SurfaceExchange& exchange, const std::vector<Vec2>& probes = {},
                               const TorchObserver& observer = {});

/// Exchange surfaces of the current active body (free edges minus lateral edges).
std::vector<BoundaryEdge> exchange_edges(const Mesh& mesh, const std::vector<char>& active);

}  // namespace hydroweld
