#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edgecl/policy.hpp"
#include "edgecl/scheduler.hpp"
#include "edgecl/stream.hpp"

namespace edgecl {

// Raised for anything wrong with a configuration: syntax, unknown keys,
// out-of-range values. The CLI maps it to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Run, Rampup, DriftRobustness, SamplerAblation, BaseConvergence, ComputeSqueeze };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

enum class ScriptKind { Family, Stitched };

// A scene of the seeded world: a variant of a structural family. Without a
// family, the experiment's family_id is used.
struct SceneRef {
  std::optional<std::size_t> family;
  std::size_t variant = 0;
};

// How the evaluation stream is built from the seeded world. Scenes are
// variants of one structural family whose backbone depends on the run seed.
struct ScriptConfig {
  ScriptKind kind = ScriptKind::Family;
  double rate = 40.0;
  // Family: `scenes` consecutive variants starting at `first_variant`.
  std::size_t first_variant = 0;
  std::size_t scenes = 20;
  double scene_duration = 90.0;
  // Stitched: named segments replayed in order; `tags` maps a tag to a scene.
  std::vector<std::pair<std::string, double>> segments;
  std::vector<std::pair<std::string, SceneRef>> tags;

  void validate() const;
};

// Optional pre-run that converges a base on other scenes of the same family.
// Its result is shared by every policy of the experiment.
struct WarmupConfig {
  std::size_t scenes = 0;  // 0: start cold
  double scene_duration = 90.0;
  std::size_t first_variant = 100;
};

struct StudyConfig {
  std::vector<double> budget_multipliers{1.0, 2.0, 4.0, 8.0};
  std::vector<double> capacity_factors{1.0, 0.5, 0.25, 0.125};
  std::size_t rampup_epochs = 30;
  std::size_t rampup_eval_items = 500;
  double rampup_target = 0.9;  // fraction of the plateau
  std::size_t plateau_epochs = 5;
  std::size_t convergence_epochs = 5;
  std::size_t reuse_first_variant = 500;
  double window = 5.0;  // seconds, windowed accuracy
};

struct ExperimentConfig {
  std::string name = "custom";
  ExperimentKind kind = ExperimentKind::Run;
  PipelineConfig pipeline;
  FamilyParams world;
  std::size_t family_id = 0;
  ScriptConfig script;
  WarmupConfig warmup;
  StudyConfig study;
  std::vector<PolicyId> policies{PolicyId::Legilimens};
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path output_dir = "edgecl-out";
  bool write_traces = true;  // per-run CSVs

  void validate() const;
};

ExperimentConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// EDGECL_OUTPUT_DIR replaces output_dir; EDGECL_SEEDS is a comma-separated list
// of non-negative integers that replaces the seed list.
void apply_env_overrides(ExperimentConfig& config);

// Seeds 1..n.
std::vector<std::uint64_t> seed_range(std::size_t n);

const std::vector<std::string>& preset_names();
ExperimentConfig preset(std::string_view name);

// Canonical TOML rendering; parse_config(to_toml(c)) reproduces c.
std::string to_toml(const ExperimentConfig& config);

}  // namespace edgecl
