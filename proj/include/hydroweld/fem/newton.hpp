#pragma once

#include <Eigen/Core>

#include <cmath>
#include <functional>

namespace hydroweld::fem {

struct NewtonOptions {
  double tolerance = 1e-8;       ///< relative to max(initial residual, reference)
  double reference = 0.0;        ///< problem-specific residual scale
  double absolute = 0.0;         ///< absolute floor
  int max_iterations = 25;
  int max_backtracks = 6;
};

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  double initial_norm = 0.0;
  double final_norm = 0.0;
};

/// Newton iteration with backtracking line search.
///
/// `residual(x, r)` fills r and returns its convergence norm; `step(x, r, dx)`
/// computes the Newton correction (the caller owns the tangent). Stagnation is
/// reported through `converged = false`, never thrown.
template <typename Residual, typename Step>
NewtonReport newton(Residual&& residual, Step&& step, Eigen::VectorXd& x, const NewtonOptions& opt) {
  NewtonReport rep;
  Eigen::VectorXd r, dx, trial, r_trial;
  double norm = residual(x, r);
  rep.initial_norm = norm;
  const double target = std::max(opt.tolerance * std::max(norm, opt.reference), opt.absolute);
  rep.final_norm = norm;
  if (!std::isfinite(norm)) return rep;
  if (norm <= target) {
    rep.converged = true;
    return rep;
  }
  for (int it = 1; it <= opt.max_iterations; ++it) {
    rep.iterations = it;
    step(x, r, dx);
    double alpha = 1.0;
    double trial_norm = 0.0;
    for (int b = 0; b <= opt.max_backtracks; ++b) {
      trial = x + alpha * dx;
      trial_norm = residual(trial, r_trial);
      if (std::isfinite(trial_norm) && trial_norm < (1.0 - 1e-4 * alpha) * norm) break;
      if (b == opt.max_backtracks) break;
      alpha *= 0.5;
    }
    if (!std::isfinite(trial_norm)) return rep;
    x = trial;
    r = r_trial;
    norm = trial_norm;
    rep.final_norm = norm;
    if (norm <= target) {
      rep.converged = true;
      return rep;
    }
  }
  return rep;
}

}  // namespace hydroweld::fem
