#pragma once

#include "hydroweld/driver/scenario.hpp"

#include <vector>

namespace hydroweld {

struct PermeationResult {
  std::vector<double> time;        ///< [s]
  std::vector<double> exit_flux;   ///< [wppm mm/s]
  std::vector<double> cumulative;  ///< permeated amount per unit area [wppm mm]
  double time_lag = 0.0;           ///< [s]
  double apparent_diffusivity = 0.0;  ///< L^2 / (6 t_lag) [mm^2/s]
  double dilute_diffusivity = 0.0;    ///< closed-form trap-retarded D_e [mm^2/s]
  double steady_flux = 0.0;
  double conservation_error = 0.0;    ///< worst per-step |content change - net inflow| / content scale
};

/// Time lag from a cumulative permeation curve: intercept with the time
/// axis of a least-squares line through the samples with t >= t_fit.
double time_lag(const std::vector<double>& t, const std::vector<double>& Q, double t_fit);

/// One-dimensional permeation through a strip charged at a constant entry
/// concentration with zero concentration at the exit face.
PermeationResult run_permeation(const Scenario& scenario, RunLog& log);

}  // namespace hydroweld
