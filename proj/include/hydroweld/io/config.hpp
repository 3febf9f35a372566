#pragma once

#include "hydroweld/driver/scenario.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace hydroweld::io {

/// Parse or validation error; `what()` carries the line and key.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Parse an INI-style scenario description.
///
///   [section]            scenario, mesh, boundary_layer, materials,
///                        materials.<BM|HAZ|WM>, traps.<family>, weld,
///                        weld.schedule, weld.exchange, permeation, jr_curve,
///                        pipeline, defects.<label>, outputs, solver
///   key = value unit     physical values must carry a unit
///   key = a b, c d  u v  comma-separated rows, trailing units per column
///   # comment
///
/// Every key is optional except scenario.kind; unknown sections and keys
/// are errors. Property tables accept inline rows (`20 190480, 400 170000
/// degC MPa`) or `csv:<path>` relative to `base_dir`. The parsed scenario
/// is validated, including the standard defect bounds.
Scenario parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
Scenario load_config(const std::filesystem::path& path);

/// Emit every setting in canonical units. parse_config(emit_config(s)) == s.
std::string emit_config(const Scenario& scenario);

/// Multiply the mesh sizes of the pipe and boundary-layer models by `factor`.
void scale_mesh(Scenario& scenario, double factor);

}  // namespace hydroweld::io
