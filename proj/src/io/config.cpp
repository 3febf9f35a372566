#include "hydroweld/io/config.hpp"

#include "hydroweld/io/units.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace hydroweld::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

bool parse_number(std::string_view tok, double& v) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  return r.ec == std::errc{} && r.ptr == tok.data() + tok.size();
}

/// Comma-separated rows of numbers with optional trailing unit tokens.
struct Rows {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> units;
};

Rows parse_rows(std::string_view text, std::size_t columns) {
  Rows out;
  const auto items = split(text, ',');
  if (items.size() == 1 && items[0].empty()) return out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::vector<double> row;
    std::istringstream is{std::string(items[i])};
    std::string tok;
    while (is >> tok) {
      double v = 0.0;
      if (!out.units.empty()) {
        out.units.push_back(tok);
      } else if (parse_number(tok, v)) {
        row.push_back(v);
      } else if (tok.size() > 1 && tok.back() == '%' && parse_number(std::string_view(tok).substr(0, tok.size() - 1), v)) {
        row.push_back(v);
        out.units.emplace_back("%");
      } else {
        out.units.push_back(tok);
      }
      if (!out.units.empty() && i + 1 < items.size())
        throw std::invalid_argument("units may only follow the last row");
    }
    if (row.size() != columns)
      throw std::invalid_argument("expected " + std::to_string(columns) + " number(s) per row, got " +
                                  std::to_string(row.size()));
    for (double v : row)
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
    out.rows.push_back(std::move(row));
  }
  if (!(out.units.empty() || out.units.size() == 1 || out.units.size() == columns))
    throw std::invalid_argument("expected 1 or " + std::to_string(columns) + " unit(s)");
  return out;
}

std::string unit_of(const Rows& r, std::size_t column) {
  if (r.units.empty()) return {};
  return r.units.size() == 1 ? r.units[0] : r.units[column];
}

std::string unit_suffix(Dimension d) {
  return d == Dimension::Dimensionless ? std::string{} : " " + std::string(canonical_unit(d));
}

bool parse_bool(std::string_view s) {
  if (s == "true" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "no" || s == "off") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(s) + "'");
}

std::uint64_t parse_unsigned(std::string_view s) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw std::invalid_argument("expected a non-negative integer, got '" + std::string(s) + "'");
  return v;
}

long long parse_integer(std::string_view s) {
  long long v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
  return v;
}

struct Entry {
  std::string key;
  std::function<void(std::string_view)> set;
  std::function<std::string()> get;  // empty for parse-only aliases
};

class Section {
 public:
  explicit Section(std::filesystem::path base) : base_(std::move(base)) {}

  void quantity(std::string key, double& ref, Dimension d) {
    add(std::move(key), [&ref, d](std::string_view v) {
          const auto r = parse_rows(v, 1);
          if (r.rows.size() != 1) throw std::invalid_argument("expected a single value");
          ref = to_canonical(r.rows[0][0], unit_of(r, 0), d);
        },
        [&ref, d] { return fmt(ref) + unit_suffix(d); });
  }
  void integer(std::string key, int& ref) {
    add(std::move(key), [&ref](std::string_view v) { ref = static_cast<int>(parse_integer(v)); },
        [&ref] { return std::to_string(ref); });
  }
  void flag(std::string key, bool& ref) {
    add(std::move(key), [&ref](std::string_view v) { ref = parse_bool(v); },
        [&ref] { return std::string(ref ? "true" : "false"); });
  }
  void text(std::string key, std::string& ref) {
    add(std::move(key), [&ref](std::string_view v) { ref = std::string(v); }, [&ref] { return ref; });
  }
  void region(std::string key, Region& ref) {
    add(std::move(key), [&ref](std::string_view v) { ref = region_from_name(v); },
        [&ref] { return std::string(region_name(ref)); });
  }
  void list(std::string key, std::vector<double>& ref, Dimension d) {
    add(std::move(key), [&ref, d](std::string_view v) {
          const auto r = parse_rows(v, 1);
          ref.clear();
          for (const auto& row : r.rows) ref.push_back(to_canonical(row[0], unit_of(r, 0), d));
        },
        [&ref, d] {
          std::string s;
          for (std::size_t i = 0; i < ref.size(); ++i) s += (i ? ", " : "") + fmt(ref[i]);
          return ref.empty() ? s : s + unit_suffix(d);
        });
  }
  void points(std::string key, std::vector<Vec2>& ref) {
    add(std::move(key), [&ref](std::string_view v) {
          const auto r = parse_rows(v, 2);
          ref.clear();
          for (const auto& row : r.rows)
            ref.emplace_back(to_canonical(row[0], unit_of(r, 0), Dimension::Length),
                             to_canonical(row[1], unit_of(r, 1), Dimension::Length));
        },
        [&ref] {
          std::string s;
          for (std::size_t i = 0; i < ref.size(); ++i) s += (i ? ", " : "") + fmt(ref[i].x()) + " " + fmt(ref[i].y());
          return ref.empty() ? s : s + " mm";
        });
  }
  void table(std::string key, PropertyTable& ref, Dimension d) {
    add(std::move(key), [&ref, d, base = base_](std::string_view v) {
          if (v.substr(0, 4) == "csv:") {
            // The header row may carry units, e.g. "degC,GPa"; cells that are
            // not units (column names) mean canonical units.
            const auto path = base / std::string(trim(v.substr(4)));
            PropertyTable raw = PropertyTable::load_csv(path.string());
            std::ifstream in(path);
            std::string header;
            std::getline(in, header);
            const auto comma = header.find(',');
            const std::string cells[2] = {std::string(trim(header.substr(0, comma))),
                                          comma == std::string::npos ? std::string{}
                                                                     : std::string(trim(header.substr(comma + 1)))};
            auto convert = [](double x, const std::string& unit, Dimension dim) {
              try {
                return to_canonical(x, unit, dim);
              } catch (const std::invalid_argument& e) {
                const std::string_view what = e.what();
                if (what.rfind("unknown unit", 0) != 0 && what.rfind("missing unit", 0) != 0) throw;
                return x;
              }
            };
            std::vector<double> t, y;
            for (std::size_t i = 0; i < raw.temperatures().size(); ++i) {
              t.push_back(convert(raw.temperatures()[i], cells[0], Dimension::Temperature));
              y.push_back(convert(raw.values()[i], cells[1], d));
            }
            ref = PropertyTable(std::move(t), std::move(y));
            return;
          }
          const auto r = parse_rows(v, 2);
          std::vector<double> t, y;
          for (const auto& row : r.rows) {
            t.push_back(to_canonical(row[0], unit_of(r, 0), Dimension::Temperature));
            y.push_back(to_canonical(row[1], unit_of(r, 1), d));
          }
          ref = PropertyTable(std::move(t), std::move(y));
        },
        [&ref, d] {
          std::string s;
          for (std::size_t i = 0; i < ref.temperatures().size(); ++i)
            s += (i ? ", " : "") + fmt(ref.temperatures()[i]) + " " + fmt(ref.values()[i]);
          return s + " degC " + std::string(canonical_unit(d));
        });
  }
  void custom(std::string key, std::function<void(std::string_view)> set, std::function<std::string()> get) {
    add(std::move(key), std::move(set), std::move(get));
  }

  std::vector<Entry> entries;

 private:
  void add(std::string key, std::function<void(std::string_view)> set, std::function<std::string()> get) {
    entries.push_back({std::move(key), std::move(set), std::move(get)});
  }
  std::filesystem::path base_;
};

void bind_region(Section& s, MaterialRegion& m) {
  s.table("expansion", m.expansion, Dimension::Expansion);
  s.table("conductivity", m.conductivity, Dimension::Conductivity);
  s.table("specific_heat", m.specific_heat, Dimension::SpecificHeat);
  s.table("density", m.density, Dimension::MassDensity);
  s.table("youngs_modulus", m.youngs, Dimension::Stress);
  s.table("yield_stress", m.yield, Dimension::Stress);
  s.quantity("poisson_ratio", m.poisson, Dimension::Dimensionless);
  s.quantity("hardening_exponent", m.hardening_exponent, Dimension::Dimensionless);
  s.quantity("toughness", m.toughness, Dimension::Toughness);
  s.quantity("strength", m.strength, Dimension::Stress);
  s.quantity("degradation_xi", m.degradation.xi, Dimension::Dimensionless);
  s.quantity("degradation_eta", m.degradation.eta, Dimension::DegradationRate);
  s.quantity("degradation_b", m.degradation.b, Dimension::Dimensionless);
  s.quantity("lattice_diffusivity", m.lattice_diffusivity, Dimension::Diffusivity);
  s.quantity("lattice_sites", m.lattice_sites, Dimension::SiteDensity);
  s.quantity("molar_volume", m.molar_volume, Dimension::MolarVolume);
  s.quantity("solubility", m.solubility, Dimension::Solubility);
  for (int k = 0; k < kTrapKinds; ++k)
    s.quantity("trap_density_" + std::string(trap_name(static_cast<TrapKind>(k))), m.trap_density[k],
               Dimension::SiteDensity);
}

void bind_defect(Section& s, DefectSpec& d) {
  s.custom("type", [&d](std::string_view v) { d.type = defect_from_name(v); },
           [&d] { return std::string(defect_name(d.type)); });
  s.quantity("depth", d.depth, Dimension::Length);
  s.list("sizes", d.sizes, Dimension::Length);
  s.points("centres", d.centres);
  s.quantity("fraction", d.fraction, Dimension::Dimensionless);
  s.quantity("width", d.width, Dimension::Length);
  s.quantity("offset", d.offset, Dimension::Length);
  s.flag("override", d.override_bounds);
  // Shorthand: `<type> = <main parameter>`.
  for (auto t : {DefectType::Porosity, DefectType::LackOfPenetration, DefectType::Imperfections,
                 DefectType::LackOfFusionOuter, DefectType::LackOfFusionInner, DefectType::RootContraction,
                 DefectType::Undercut}) {
    Section tmp({});
    if (t == DefectType::Porosity)
      tmp.quantity("", d.fraction, Dimension::Dimensionless);
    else if (t == DefectType::Imperfections)
      tmp.list("", d.sizes, Dimension::Length);
    else
      tmp.quantity("", d.depth, Dimension::Length);
    auto set = tmp.entries[0].set;
    s.custom(std::string(defect_name(t)), [&d, t, set](std::string_view v) {
      d.type = t;
      set(v);
    }, {});
  }
}

/// Keys of one section bound to the scenario fields. Throws for unknown sections.
Section bind_section(Scenario& sc, const std::string& name, DefectSpec* defect, const std::filesystem::path& base) {
  Section s(base);
  auto& p = sc.pipe;
  auto& r = sc.refinement;
  if (name == "scenario") {
    s.custom("kind", [&sc](std::string_view v) { sc.kind = kind_from_name(v); },
             [&sc] { return std::string(kind_name(sc.kind)); });
    s.custom("seed", [&sc](std::string_view v) {
      sc.seed = parse_unsigned(v);
    }, [&sc] { return std::to_string(sc.seed); });
  } else if (name == "mesh") {
    s.quantity("inner_radius", p.inner_radius, Dimension::Length);
    s.quantity("thickness", p.thickness, Dimension::Length);
    s.quantity("length", p.length, Dimension::Length);
    s.quantity("weld_angle", p.weld_angle, Dimension::Angle);
    s.integer("beads", p.n_beads);
    s.quantity("h_min", r.h_min, Dimension::Length);
    s.quantity("h_max", r.h_max, Dimension::Length);
    s.quantity("growth", r.growth, Dimension::Dimensionless);
    s.integer("order", r.order);
    s.quantity("haz_width", r.haz_width, Dimension::Length);
    s.quantity("root_gap", r.root_gap, Dimension::Length);
  } else if (name == "boundary_layer") {
    auto& b = sc.boundary_layer;
    s.quantity("outer_radius", b.outer_radius, Dimension::Length);
    s.quantity("tip_size", b.tip_size, Dimension::Length);
    s.quantity("patch_ahead", b.patch_ahead, Dimension::Length);
    s.quantity("patch_behind", b.patch_behind, Dimension::Length);
    s.quantity("patch_height", b.patch_height, Dimension::Length);
    s.quantity("growth", b.growth, Dimension::Dimensionless);
    s.integer("order", b.order);
  } else if (name == "materials") {
    s.quantity("taylor_quinney", sc.materials.taylor_quinney, Dimension::Dimensionless);
    s.flag("field_dependent_length_scale", sc.materials.field_dependent_length_scale);
  } else if (name.rfind("materials.", 0) == 0) {
    bind_region(s, sc.materials[region_from_name(name.substr(10))]);
  } else if (name.rfind("traps.", 0) == 0) {
    auto& f = sc.materials.traps[static_cast<int>(trap_from_name(name.substr(6)))];
    s.quantity("binding_energy", f.binding_energy, Dimension::MolarEnergy);
    s.flag("evolving", f.evolving);
  } else if (name == "weld") {
    auto& w = sc.weld;
    s.flag("mechanics", w.mechanics);
    s.quantity("mechanics_interval", w.mechanics_interval, Dimension::TemperatureChange);
    s.quantity("haz_temperature", w.haz_temperature, Dimension::Temperature);
    s.quantity("probe_offset", w.probe_offset, Dimension::Length);
    s.quantity("probe_depth", w.probe_depth, Dimension::Dimensionless);
  } else if (name == "weld.schedule") {
    auto& t = sc.weld.schedule;
    s.quantity("apply_duration", t.apply_duration, Dimension::Time);
    s.quantity("hold_duration", t.hold_duration, Dimension::Time);
    s.quantity("pause_duration", t.pause_duration, Dimension::Time);
    s.quantity("melt_temperature", t.melt_temperature, Dimension::Temperature);
    s.quantity("interpass_temperature", t.interpass_temperature, Dimension::Temperature);
    s.quantity("final_temperature", t.final_temperature, Dimension::Temperature);
    s.quantity("final_tolerance", t.final_tolerance, Dimension::TemperatureChange);
    s.flag("final_uniform", t.final_uniform);
    s.quantity("cooldown_cap", t.cooldown_cap, Dimension::Time);
    s.quantity("dt_min", t.dt_min, Dimension::Time);
    s.quantity("dt_max", t.dt_max, Dimension::Time);
    s.quantity("dt_initial", t.dt_initial, Dimension::Time);
    s.quantity("target_change", t.target_change, Dimension::TemperatureChange);
    s.integer("max_halvings", t.max_halvings);
  } else if (name == "weld.exchange") {
    auto& x = sc.weld.exchange;
    s.flag("enabled", x.enabled);
    s.quantity("film", x.film, Dimension::FilmCoefficient);
    s.quantity("emissivity", x.emissivity, Dimension::Dimensionless);
    s.quantity("ambient", x.ambient, Dimension::Temperature);
  } else if (name == "permeation") {
    auto& m = sc.permeation;
    s.region("region", m.region);
    s.quantity("thickness", m.thickness, Dimension::Length);
    s.integer("elements", m.elements);
    s.quantity("charging", m.charging, Dimension::Concentration);
    s.quantity("duration", m.duration, Dimension::Dimensionless);
    s.integer("steps_per_lag", m.steps_per_lag);
    s.flag("traps", m.traps);
  } else if (name == "jr_curve") {
    auto& j = sc.jr;
    s.region("region", j.region);
    s.quantity("j_max", j.j_max, Dimension::Toughness);
    s.quantity("max_extension", j.max_extension, Dimension::Length);
    s.quantity("j_step", j.j_step, Dimension::Dimensionless);
    s.quantity("elements_per_length", j.elements_per_length, Dimension::Dimensionless);
    s.flag("plasticity", j.plasticity);
    s.integer("max_passes", j.max_passes);
    s.quantity("stagger_tolerance", j.stagger_tolerance, Dimension::Dimensionless);
  } else if (name == "pipeline") {
    auto& q = sc.pipeline;
    s.quantity("ramp_rate", q.ramp_rate, Dimension::StressRate);
    s.flag("hydrogen", q.hydrogen);
    s.flag("residual_stress", q.residual_stress);
    s.text("residual_state", q.residual_state);
    s.quantity("pressure_step", q.pressure_step, Dimension::Stress);
    s.quantity("fine_pressure_step", q.fine_pressure_step, Dimension::Stress);
    s.quantity("refine_threshold", q.refine_threshold, Dimension::Dimensionless);
    s.quantity("yield_pressure", q.yield_pressure, Dimension::Stress);
    s.integer("max_passes", q.max_passes);
    s.quantity("stagger_tolerance", q.stagger_tolerance, Dimension::Dimensionless);
    s.integer("max_halvings", q.max_halvings);
  } else if (name.rfind("defects.", 0) == 0 && name.size() > 8 && defect) {
    bind_defect(s, *defect);
  } else if (name == "outputs") {
    s.flag("vtk", sc.outputs.vtk);
    s.integer("vtk_every", sc.outputs.vtk_every);
    s.points("probes", sc.outputs.probes);
  } else if (name == "solver") {
    auto& v = sc.solver;
    s.quantity("newton_tolerance", v.newton_tolerance, Dimension::Dimensionless);
    s.integer("max_iterations", v.max_iterations);
    s.integer("max_cuts", v.max_cuts);
    s.quantity("transport_tolerance", v.transport_tolerance, Dimension::Dimensionless);
    s.integer("threads", v.threads);
  } else {
    throw std::invalid_argument("unknown section [" + name + "]");
  }
  return s;
}

[[noreturn]] void fail(int line, const std::string& where, const std::string& what) {
  std::ostringstream os;
  os << "config:" << line << ": " << where << (where.empty() ? "" : ": ") << what;
  throw ConfigError(os.str());
}

}  // namespace

Scenario parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  Scenario sc;
  std::map<std::string, std::size_t> defect_index;
  std::vector<int> defect_line;
  std::map<std::string, int> seen;  // "section.key" -> line
  std::string section;
  std::optional<Section> bound;
  bool have_kind = false;

  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "", "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      DefectSpec* d = nullptr;
      if (section.rfind("defects.", 0) == 0) {
        auto [it, fresh] = defect_index.emplace(section, sc.defects.size());
        if (fresh) {
          sc.defects.emplace_back();
          defect_line.push_back(lineno);
        }
        d = &sc.defects[it->second];
      }
      try {
        bound.emplace(bind_section(sc, section, d, base_dir));
      } catch (const std::exception& e) {
        fail(lineno, "", e.what());
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(lineno, "", "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const std::string where = "[" + section + "] " + key;
    if (!bound) fail(lineno, key, "key outside of a section");
    const Entry* entry = nullptr;
    for (const auto& e : bound->entries)
      if (e.key == key) entry = &e;
    if (!entry) fail(lineno, where, "unknown key");
    if (auto [it, fresh] = seen.emplace(section + "." + key, lineno); !fresh)
      fail(lineno, where, "duplicate key (first set on line " + std::to_string(it->second) + ")");
    try {
      entry->set(value);
    } catch (const std::exception& e) {
      fail(lineno, where, e.what());
    }
    if (section == "scenario" && key == "kind") have_kind = true;
  }
  if (!have_kind) fail(lineno, "[scenario] kind", "missing required key");
  for (const auto& [label, idx] : defect_index) {
    try {
      validate_defect(sc.defects[idx], sc.pipe);
    } catch (const std::exception& e) {
      fail(defect_line[idx], "[" + label + "]", e.what());
    }
  }
  try {
    sc.validate();
  } catch (const std::exception& e) {
    fail(lineno, "", e.what());
  }
  return sc;
}

Scenario load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string emit_config(const Scenario& scenario) {
  Scenario sc = scenario;  // binding needs mutable references
  std::ostringstream os;
  auto emit = [&](const std::string& name, DefectSpec* d = nullptr) {
    const Section s = bind_section(sc, name, d, {});
    os << "[" << name << "]\n";
    for (const auto& e : s.entries)
      if (e.get) os << e.key << " = " << e.get() << "\n";
    os << "\n";
  };
  for (const char* n : {"scenario", "mesh", "boundary_layer", "materials"}) emit(n);
  for (Region r : kAllRegions) emit("materials." + std::string(region_name(r)));
  for (int k = 0; k < kTrapKinds; ++k) emit("traps." + std::string(trap_name(static_cast<TrapKind>(k))));
  for (const char* n : {"weld", "weld.schedule", "weld.exchange", "permeation", "jr_curve", "pipeline"}) emit(n);
  for (std::size_t i = 0; i < sc.defects.size(); ++i) emit("defects." + std::to_string(i + 1), &sc.defects[i]);
  for (const char* n : {"outputs", "solver"}) emit(n);
  return os.str();
}

void scale_mesh(Scenario& scenario, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("mesh scale must be positive");
  scenario.refinement.h_min *= factor;
  scenario.refinement.h_max *= factor;
  scenario.boundary_layer.tip_size *= factor;
  if (scenario.jr.elements_per_length > 0.0) scenario.jr.elements_per_length /= factor;
}

}  // namespace hydroweld::io
