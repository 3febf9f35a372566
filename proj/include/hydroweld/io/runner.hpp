#pragma once

#include "hydroweld/driver/residual_state.hpp"
#include "hydroweld/driver/scenario.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>

namespace hydroweld::io {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kSolverFailure = 2, kWarningsAsErrors = 3 };

struct RunOptions {
  std::filesystem::path out = "run";
  std::optional<std::uint64_t> seed;
  double mesh_scale = 1.0;
  int threads = 1;
  bool warnings_as_errors = false;
};

/// Residual weld states shared between runs with identical geometry,
/// materials and weld settings. Thread safe.
class ResidualCache {
 public:
  ResidualCache();
  ~ResidualCache();
  const ResidualState& get(const Scenario& scenario, const std::function<ResidualState()>& compute);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Apply the command-line overrides (seed, mesh scale, threads).
void apply_overrides(Scenario& scenario, const RunOptions& options);

/// Run one scenario into `dir`: effective.cfg, manifest.json and the
/// kind-specific artifacts (CSV, VTK, residual state). A manifest is
/// written on failure too. Returns an ExitCode.
int run_scenario(const Scenario& scenario, const std::filesystem::path& dir, const RunOptions& options,
                 ResidualCache* cache = nullptr);

/// Parse, check the subcommand kind, apply overrides and run.
int run_config(ScenarioKind kind, const std::filesystem::path& config, const RunOptions& options, bool validate_only);

/// Run every *.cfg in a directory (concurrently, up to options.threads)
/// plus a defect-free reference, and write sweep_summary.csv with
/// defect_type, p_f and reduction_vs_defect_free.
int run_sweep(const std::filesystem::path& config_dir, const RunOptions& options, bool validate_only);

}  // namespace hydroweld::io
