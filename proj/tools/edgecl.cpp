// edgecl: run continual-learning simulations from a TOML config or a preset.
//
//   edgecl run <config.toml>
//   edgecl preset <name> [--seeds N] [--out DIR] [--print]
//   edgecl validate <config.toml>
//   edgecl schema
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "edgecl/config.hpp"
#include "edgecl/experiments.hpp"
#include "edgecl/report.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

void print_summary(const edgecl::ExperimentReport& report) {
  std::map<std::string, std::vector<double>> acc, frac;
  for (const auto& r : report.runs) {
    std::string key = std::string(edgecl::to_string(r.policy)) + (r.variant.empty() ? "" : "-" + r.variant);
    acc[key].push_back(r.metrics.overall_accuracy);
    frac[key].push_back(r.metrics.training_fraction);
  }
  std::printf("%-32s %6s %14s %14s\n", "arm", "runs", "med.accuracy", "med.train.frac");
  for (const auto& [key, v] : acc) {
    std::printf("%-32s %6zu %14.4f %14.4f\n", key.c_str(), v.size(), edgecl::median(v), edgecl::median(frac[key]));
  }
}

int execute(edgecl::ExperimentConfig config) {
  edgecl::apply_env_overrides(config);
  config.validate();
  edgecl::prepare_output_dir(config.output_dir);
  edgecl::RunSink sink;
  if (config.write_traces) sink = edgecl::trace_writer(config.output_dir);
  const auto report = edgecl::run_experiment(config, sink);
  edgecl::write_report(config.output_dir, report);
  print_summary(report);
  std::printf("wrote %s\n", config.output_dir.string().c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continual-learning simulator for serialized-compute edge devices"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a TOML config");
  run->add_option("config", config_path, "Path to the TOML config")->required();

  std::string preset_name, out_dir;
  std::size_t seed_count = 0;
  bool print_only = false;
  auto* preset = app.add_subcommand("preset", "Run a named preset");
  preset->add_option("name", preset_name, "rampup | drift-robustness | sampler-ablation | base-convergence | compute-squeeze")
      ->required();
  preset->add_option("--seeds", seed_count, "Use seeds 1..N instead of the preset's list")->check(CLI::PositiveNumber);
  preset->add_option("--out", out_dir, "Output directory");
  preset->add_flag("--print", print_only, "Print the preset as TOML and exit");

  auto* validate = app.add_subcommand("validate", "Check a TOML config without running it");
  validate->add_option("config", config_path, "Path to the TOML config")->required();

  app.add_subcommand("schema", "Print the output file schema as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return execute(edgecl::load_config(config_path));
    if (*preset) {
      auto config = edgecl::preset(preset_name);
      if (seed_count) config.seeds = edgecl::seed_range(seed_count);
      if (!out_dir.empty()) config.output_dir = out_dir;
      if (print_only) {
        std::cout << edgecl::to_toml(config);
        return kOk;
      }
      return execute(std::move(config));
    }
    if (*validate) {
      auto config = edgecl::load_config(config_path);
      edgecl::apply_env_overrides(config);
      config.validate();
      std::printf("ok: %s (%s, %zu policies, %zu seeds)\n", config.name.c_str(),
                  std::string(edgecl::to_string(config.kind)).c_str(), config.policies.size(), config.seeds.size());
      return kOk;
    }
    std::cout << edgecl::schema_json() << '\n';
    return kOk;
  } catch (const edgecl::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeError;
  }
}
