#include "hydroweld/io/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace hydroweld;

int main(int argc, char** argv) {
  CLI::App app{"Girth-weld hydrogen integrity simulations"};
  app.require_subcommand(1);

  io::RunOptions options;
  std::uint64_t seed = 0;
  bool validate = false;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", options.out, "Run directory")->capture_default_str();
    sub->add_option("--seed", seed, "Override the random seed");
    sub->add_option("--mesh-scale", options.mesh_scale, "Multiply mesh sizes")->check(CLI::PositiveNumber);
    sub->add_option("--threads", options.threads, "Worker threads (sweep concurrency)")->check(CLI::PositiveNumber);
    sub->add_flag("--validate", validate, "Parse and validate only; write nothing");
    sub->add_flag("--warnings-as-errors", options.warnings_as_errors, "Exit with code 3 when warnings were recorded");
  };

  std::string config;
  struct Command {
    const char* name;
    ScenarioKind kind;
    const char* help;
  };
  const Command commands[] = {
      {"weld", ScenarioKind::Weld, "Multi-pass weld: temperatures, HAZ and residual stresses"},
      {"pipeline", ScenarioKind::Pipeline, "Pressurised pipe with hydrogen until failure"},
      {"jr-curve", ScenarioKind::JRCurve, "Crack growth resistance curve of one region"},
      {"permeation", ScenarioKind::Permeation, "Permeation time-lag test of one region"},
  };
  std::vector<std::pair<CLI::App*, ScenarioKind>> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("config", config, "Scenario file")->required()->check(CLI::ExistingFile);
    common(sub);
    subs.emplace_back(sub, c.kind);
  }
  auto* sweep = app.add_subcommand("sweep", "Run every pipeline config in a directory and summarise p_f");
  sweep->add_option("config-dir", config, "Directory of scenario files")->required()->check(CLI::ExistingDirectory);
  common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? io::kSuccess : io::kUsage;
  }
  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--seed")) options.seed = seed;
    if (sub == sweep) return io::run_sweep(config, options, validate);
    for (const auto& [s, kind] : subs)
      if (s == sub) return io::run_config(kind, config, options, validate);
  }
  return io::kUsage;
}
