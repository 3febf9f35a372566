#include "hydroweld/io/runner.hpp"

#include "hydroweld/driver/jr_curve.hpp"
#include "hydroweld/driver/permeation.hpp"
#include "hydroweld/driver/pipeline.hpp"
#include "hydroweld/driver/weld.hpp"
#include "hydroweld/io/config.hpp"
#include "hydroweld/io/csv.hpp"
#include "hydroweld/io/vtk.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

namespace hydroweld::io {

using nlohmann::json;
namespace fs = std::filesystem;

struct ResidualCache::Impl {
  std::mutex mutex;
  std::map<std::string, std::shared_future<ResidualState>> entries;
};

ResidualCache::ResidualCache() : impl_(std::make_unique<Impl>()) {}
ResidualCache::~ResidualCache() = default;

namespace {

/// Everything that determines the weld outcome, as canonical text.
std::string weld_key(const Scenario& sc) {
  Scenario w;
  w.kind = ScenarioKind::Weld;
  w.pipe = sc.pipe;
  w.refinement = sc.refinement;
  w.materials = sc.materials;
  w.weld = sc.weld;
  w.solver = sc.solver;
  w.solver.threads = 1;
  return emit_config(w);
}

}  // namespace

const ResidualState& ResidualCache::get(const Scenario& sc, const std::function<ResidualState()>& compute) {
  std::shared_future<ResidualState> f;
  std::promise<ResidualState> promise;
  bool owner = false;
  {
    std::lock_guard lock(impl_->mutex);
    const auto key = weld_key(sc);
    auto it = impl_->entries.find(key);
    if (it == impl_->entries.end()) {
      f = promise.get_future().share();
      impl_->entries.emplace(key, f);
      owner = true;
    } else {
      f = it->second;
    }
  }
  if (owner) {
    try {
      promise.set_value(compute());
    } catch (...) {
      promise.set_exception(std::current_exception());
    }
  }
  return f.get();
}

void apply_overrides(Scenario& sc, const RunOptions& o) {
  if (o.seed) sc.seed = *o.seed;
  if (o.mesh_scale != 1.0) scale_mesh(sc, o.mesh_scale);
  sc.solver.threads = std::max(1, o.threads);
}

namespace {

struct Outcome {
  int code = kSuccess;
  json results = json::object();
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

json vec2(const Vec2& v) { return json::array({v.x(), v.y()}); }

json run_weld_kind(const Scenario& sc, const fs::path& dir, RunLog& log, std::vector<std::string>& artifacts) {
  const Mesh mesh = build_pipe_mesh(sc);
  const auto w = run_weld(sc, mesh, log);
  save_residual_state(w.residual, (dir / "residual_state.bin").string());
  artifacts.emplace_back("residual_state.bin");

  std::vector<std::string> header{"time"};
  for (std::size_t k = 0; k < w.thermal.probes.size(); ++k) header.push_back("T_probe" + std::to_string(k));
  CsvTable probes(header);
  for (std::size_t i = 0; i < w.thermal.times.size(); ++i) {
    std::vector<CsvTable::Cell> row{w.thermal.times[i]};
    for (const auto& s : w.thermal.probe_series) row.emplace_back(s[i]);
    probes.add_row(std::move(row));
  }
  write_csv(probes, dir / "probes.csv");
  artifacts.emplace_back("probes.csv");

  CsvTable lines({"fraction", "radius", "z", "max_principal_stress"});
  for (const auto& l : w.lines)
    for (std::size_t i = 0; i < l.z.size(); ++i) lines.add_row({l.fraction, l.radius, l.z[i], l.max_principal[i]});
  write_csv(lines, dir / "stress_lines.csv");
  artifacts.emplace_back("stress_lines.csv");

  if (sc.outputs.vtk) {
    const MeshGeometry geom(mesh);
    write_vtk(dir / "weld.vtk", mesh, state_fields(mesh, geom, w.final_state, sc.materials, &w.thermal.peak_temperature));
    artifacts.emplace_back("weld.vtk");
  }
  json r;
  r["haz_width_mm"] = w.haz_width;
  r["root_max_principal_MPa"] = w.root_stress;
  r["cap_max_principal_MPa"] = w.cap_stress;
  r["probe_position_mm"] = vec2(w.probe);
  r["probe_pass_peak_temperature_degC"] = w.probe_pass_peaks;
  r["thermal_steps"] = w.thermal.steps;
  r["thermal_rejected_steps"] = w.thermal.rejected;
  r["pass_end_times_s"] = w.thermal.pass_end_times;
  r["mechanics_solves"] = w.mechanics_solves;
  return r;
}

json run_permeation_kind(const Scenario& sc, const fs::path& dir, RunLog& log, std::vector<std::string>& artifacts) {
  const auto p = run_permeation(sc, log);
  CsvTable t({"time", "exit_flux", "cumulative", "apparent_diffusivity"});
  const double L = sc.permeation.thickness;
  for (std::size_t i = 0; i < p.time.size(); ++i) {
    // Running time-lag estimate from the samples so far (NaN early on).
    double d = std::numeric_limits<double>::quiet_NaN();
    if (p.cumulative[i] > 0.0 && p.exit_flux[i] > 0.0) {
      const double lag = p.time[i] - p.cumulative[i] / p.exit_flux[i];
      if (lag > 0.0) d = L * L / (6.0 * lag);
    }
    t.add_row({p.time[i], p.exit_flux[i], p.cumulative[i], d});
  }
  write_csv(t, dir / "permeation.csv");
  artifacts.emplace_back("permeation.csv");
  json r;
  r["region"] = std::string(region_name(sc.permeation.region));
  r["time_lag_s"] = p.time_lag;
  r["apparent_diffusivity_mm2_s"] = p.apparent_diffusivity;
  r["dilute_diffusivity_mm2_s"] = p.dilute_diffusivity;
  r["steady_flux"] = p.steady_flux;
  r["conservation_error"] = p.conservation_error;
  return r;
}

json run_jr_kind(const Scenario& sc, const fs::path& dir, RunLog& log, std::vector<std::string>& artifacts) {
  const auto jr = run_jr_curve(sc, log);
  CsvTable t({"K_applied", "J_applied", "delta_a"});
  for (const auto& p : jr.curve) t.add_row({p.K, p.J, p.delta_a});
  write_csv(t, dir / "jr_curve.csv");
  artifacts.emplace_back("jr_curve.csv");
  if (sc.outputs.vtk) {
    const MeshGeometry geom(jr.mesh);
    write_vtk(dir / "jr_final.vtk", jr.mesh, state_fields(jr.mesh, geom, jr.final_state, sc.materials));
    artifacts.emplace_back("jr_final.vtk");
  }
  json r;
  r["region"] = std::string(region_name(sc.jr.region));
  r["initiation_J_N_mm"] = jr.initiation_J;
  r["J_at_0.5mm_N_mm"] = j_at_extension(jr.curve, 0.5);
  r["tip_element_size_mm"] = jr.tip_size;
  r["length_scale_mm"] = jr.length_scale;
  r["irwin_plastic_zone_mm"] = jr.plastic_zone;
  r["small_scale_yielding_valid"] = jr.small_scale_valid;
  r["increments"] = jr.curve.size();
  r["final_extension_mm"] = jr.curve.empty() ? 0.0 : jr.curve.back().delta_a;
  return r;
}

json run_pipeline_kind(const Scenario& sc, const fs::path& dir, RunLog& log, std::vector<std::string>& artifacts,
                       ResidualCache* cache) {
  const Mesh mesh = build_pipe_mesh(sc);
  std::optional<ResidualState> residual;
  if (sc.pipeline.residual_stress) {
    if (!sc.pipeline.residual_state.empty()) {
      residual = load_residual_state(sc.pipeline.residual_state);
      log.note("pipeline: residual state loaded from " + sc.pipeline.residual_state);
    } else {
      auto compute = [&] {
        RunLog weld_log;
        auto w = run_weld(sc, mesh, weld_log);
        for (auto& s : weld_log.warnings) log.warn("weld: " + s);
        for (auto& s : weld_log.convergence) log.note("weld: " + s);
        return std::move(w.residual);
      };
      residual = cache ? cache->get(sc, compute) : compute();
    }
  }
  const MeshGeometry geom(mesh);
  int count = 0;
  PipelineObserver observer;
  if (sc.outputs.vtk && sc.outputs.vtk_every > 0) {
    observer = [&](const PipelineIncrement&, const FieldState& state) {
      if (++count % sc.outputs.vtk_every) return;
      std::ostringstream name;
      name << "pipeline_" << std::setw(4) << std::setfill('0') << count << ".vtk";
      write_vtk(dir / name.str(), mesh, state_fields(mesh, geom, state, sc.materials));
      artifacts.push_back(name.str());
    };
  }
  const auto res = run_pipeline(sc, mesh, residual ? &*residual : nullptr, log, observer);

  CsvTable h({"pressure", "time", "max_phi", "passes", "converged", "boundary_concentration", "hydrogen_content"});
  for (const auto& i : res.history)
    h.add_row({i.pressure, i.time, i.max_phi, static_cast<long long>(i.passes), static_cast<long long>(i.converged),
               i.boundary_concentration, i.hydrogen_content});
  write_csv(h, dir / "pressure_history.csv");
  artifacts.emplace_back("pressure_history.csv");
  if (sc.outputs.vtk) {
    write_vtk(dir / "pipeline_final.vtk", mesh, state_fields(mesh, geom, res.final_state, sc.materials));
    artifacts.emplace_back("pipeline_final.vtk");
  }

  json r;
  r["failure_pressure_MPa"] = res.failure_pressure;
  r["failure_mode"] = std::string(failure_mode_name(res.mode));
  r["yield_pressure_MPa"] = res.yield_pressure;
  r["increments"] = res.history.size();
  r["residual_stress"] = residual.has_value();
  r["transfer_equilibrium_residual"] = res.transfer_equilibrium;
  if (res.initiated) {
    r["initiation"] = {{"position_mm", vec2(res.initiation)}, {"pressure_MPa", res.initiation_pressure}};
  } else {
    r["initiation"] = nullptr;
  }
  json path = json::array();
  for (int e : res.crack.elements) path.push_back(vec2(mesh.element_centroid(e)));
  r["crack_path_mm"] = path;
  json defects = json::array();
  for (const auto& d : res.defects)
    defects.push_back({{"type", std::string(defect_name(d.type))},
                       {"broken_points", d.points.size()},
                       {"placement", d.placement},
                       {"points", d.points}});
  r["defects"] = defects;
  return r;
}

Outcome execute(const Scenario& sc, const fs::path& dir, const RunOptions& options, ResidualCache* cache) {
  fs::create_directories(dir);
  const std::string effective = emit_config(sc);
  write_text(dir / "effective.cfg", effective);

  RunLog log;
  std::vector<std::string> artifacts{"effective.cfg"};
  json manifest;
  manifest["program"] = "hydroweld";
  manifest["kind"] = std::string(kind_name(sc.kind));
  manifest["seed"] = sc.seed;
  manifest["effective_config"] = effective;
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (sc.kind) {
      case ScenarioKind::Weld: out.results = run_weld_kind(sc, dir, log, artifacts); break;
      case ScenarioKind::Permeation: out.results = run_permeation_kind(sc, dir, log, artifacts); break;
      case ScenarioKind::JRCurve: out.results = run_jr_kind(sc, dir, log, artifacts); break;
      case ScenarioKind::Pipeline: out.results = run_pipeline_kind(sc, dir, log, artifacts, cache); break;
    }
    manifest["status"] = "completed";
    if (options.warnings_as_errors && !log.warnings.empty()) out.code = kWarningsAsErrors;
  } catch (const std::exception& e) {
    manifest["status"] = "failed";
    manifest["error"] = e.what();
    std::cerr << "error: " << dir.string() << ": " << e.what() << "\n";
    out.code = kSolverFailure;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& w : log.warnings) std::cerr << "warning: " << dir.string() << ": " << w << "\n";
  manifest["warnings"] = log.warnings;
  manifest["convergence_log"] = log.convergence;
  manifest["results"] = out.results;
  artifacts.emplace_back("manifest.json");
  manifest["artifacts"] = artifacts;
  manifest["exit_code"] = out.code;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  // Wall-clock time is kept out of the manifest so reruns are byte-identical.
  write_text(dir / "timing.txt", "wall_seconds " + format_number(seconds) + "\n");
  return out;
}

}  // namespace

int run_scenario(const Scenario& scenario, const fs::path& dir, const RunOptions& options, ResidualCache* cache) {
  return execute(scenario, dir, options, cache).code;
}

int run_config(ScenarioKind kind, const fs::path& config, const RunOptions& options, bool validate_only) {
  Scenario sc;
  try {
    sc = load_config(config);
    if (sc.kind != kind)
      throw ConfigError(config.string() + ": config declares kind '" + std::string(kind_name(sc.kind)) +
                        "' but the subcommand is '" + std::string(kind_name(kind)) + "'");
    apply_overrides(sc, options);
    sc.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (validate_only) return kSuccess;
  return run_scenario(sc, options.out, options);
}

int run_sweep(const fs::path& config_dir, const RunOptions& options, bool validate_only) {
  struct Job {
    std::string name;
    Scenario scenario;
    Outcome outcome;
  };
  std::vector<Job> jobs;
  try {
    if (!fs::is_directory(config_dir)) throw ConfigError("'" + config_dir.string() + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(config_dir))
      if (entry.path().extension() == ".cfg") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ConfigError("no .cfg files in '" + config_dir.string() + "'");
    for (const auto& f : files) {
      Scenario sc = load_config(f);
      if (sc.kind != ScenarioKind::Pipeline)
        throw ConfigError(f.string() + ": sweep configs must be pipeline scenarios");
      apply_overrides(sc, options);
      sc.validate();
      jobs.push_back({f.stem().string(), std::move(sc), {}});
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (validate_only) return kSuccess;

  // Defect-free reference: a config without defects, else the first one with its defects removed.
  const auto ref = std::find_if(jobs.begin(), jobs.end(), [](const Job& j) { return j.scenario.defects.empty(); });
  std::size_t reference = 0;
  if (ref == jobs.end()) {
    Scenario base = jobs.front().scenario;
    base.defects.clear();
    jobs.insert(jobs.begin(), Job{"defect_free", std::move(base), {}});
  } else {
    reference = static_cast<std::size_t>(ref - jobs.begin());
  }

  fs::create_directories(options.out);
  ResidualCache cache;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      std::cerr << "sweep: running " << jobs[i].name << "\n";
      jobs[i].outcome = execute(jobs[i].scenario, options.out / jobs[i].name, options, &cache);
    }
  };
  const int n = std::clamp(options.threads, 1, static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  auto pressure = [](const Outcome& o) {
    return o.results.contains("failure_pressure_MPa") ? o.results["failure_pressure_MPa"].get<double>()
                                                       : std::numeric_limits<double>::quiet_NaN();
  };
  const double p0 = pressure(jobs[reference].outcome);
  CsvTable summary({"defect_type", "p_f", "reduction_vs_defect_free", "config", "failure_mode"});
  int code = kSuccess;
  for (const auto& j : jobs) {
    std::string type;
    for (const auto& d : j.scenario.defects) type += (type.empty() ? "" : "+") + std::string(defect_name(d.type));
    if (type.empty()) type = "none";
    const double p = pressure(j.outcome);
    const std::string mode = j.outcome.results.contains("failure_mode") ? j.outcome.results["failure_mode"].get<std::string>()
                                                                        : "failed";
    summary.add_row({type, p, (p0 - p) / p0, j.name, mode});
    code = std::max(code, j.outcome.code);
  }
  write_csv(summary, options.out / "sweep_summary.csv");
  return code;
}

}  // namespace hydroweld::io
