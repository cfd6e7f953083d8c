#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "edgecl/config.hpp"
#include "edgecl/scheduler.hpp"

namespace edgecl {

// The seeded world of one experiment seed: a family backbone and the scripts
// built from it.
SceneSpec world_backbone(const ExperimentConfig& config, std::uint64_t seed);
StreamScript build_script(const ExperimentConfig& config, std::uint64_t seed);
StreamScript build_warmup_script(const ExperimentConfig& config, std::uint64_t seed);

// Family script over `count` variants starting at `first_variant`, using the
// experiment's rate and scene duration.
StreamScript build_family_script(const ExperimentConfig& config, std::uint64_t seed, std::size_t first_variant,
                                 std::size_t count, double scene_duration);

struct WarmState {
  BaseModelState base;
  ModelWeights deployed;
};

// Legilimens run over the warmup script; nullopt when warmup is disabled.
std::optional<WarmState> warm_up(const ExperimentConfig& config, std::uint64_t seed);

// Start state for `policy` from a shared warmup: base-keeping policies get the
// base and the deployed model, the others only the deployed model.
InitialState initial_state(PolicyId policy, const std::optional<WarmState>& warm);

struct MetricsOptions {
  double window = 5.0;
  std::size_t convergence_epochs = 5;
};

struct SegmentMetrics {
  std::size_t segment = 0;
  std::string tag;
  std::size_t scene_id = 0;
  double start = 0.0;
  double end = 0.0;
  double accuracy = 0.0;
  std::size_t items = 0;
  double training_seconds = 0.0;  // TRAINING time overlapping the segment
};

struct RunMetrics {
  double overall_accuracy = 0.0;
  std::vector<double> windowed_accuracy;  // NaN for windows without items
  double training_fraction = 0.0;
  double training_seconds = 0.0;
  std::size_t labels = 0;
  std::size_t retrains = 0;  // sessions that trained
  double mean_epochs = 0.0;
  double mean_training_units = 0.0;  // per retrain
  std::optional<std::size_t> convergence_round;
  std::vector<SegmentMetrics> segments;
  // Per segment: distance between the base and the first specialization on
  // that segment (probe-set centroids); NaN where no base was involved.
  std::vector<double> scene_base_distance;
  std::vector<double> base_to_mean_distance;  // per retrain with a base
  std::size_t served = 0;
  std::size_t queued_at_horizon = 0;
  bool overloaded = false;
};

RunMetrics compute_metrics(const RunTrace& trace, const StreamScript& script, const MetricsOptions& options);

// First epoch (0 = before training) at which `curve` reaches `target` times
// its plateau, the mean of the last `plateau_epochs` entries. curve.size()
// if it never does.
std::size_t epochs_to_target(const std::vector<double>& curve, double target, std::size_t plateau_epochs);

struct RunRecord {
  PolicyId policy = PolicyId::Legilimens;
  std::string variant;  // study arm, empty for plain runs
  std::uint64_t seed = 0;
  RunMetrics metrics;

  std::string id() const;
};

struct RampupCurve {
  std::uint64_t seed = 0;
  std::size_t round = 0;
  std::size_t scene_id = 0;
  std::size_t selected = 0;
  std::vector<double> meta;  // initialized from the base
  std::vector<double> ekya;  // initialized from Ekya's previous specialized model
  std::size_t meta_epochs = 0;
  std::size_t ekya_epochs = 0;
};

struct RampupSeed {
  std::uint64_t seed = 0;
  std::vector<RampupCurve> curves;
  double meta_mean_epochs = 0.0;
  double ekya_mean_epochs = 0.0;
};

struct SegmentRow {
  PolicyId policy = PolicyId::Legilimens;
  std::uint64_t seed = 0;
  SegmentMetrics metrics;
};

struct AblationRow {
  PolicyId policy = PolicyId::Legilimens;
  std::uint64_t seed = 0;
  std::string variant;
  SelectionMode selection = SelectionMode::ScpsEntropy;
  double budget_multiplier = 1.0;
  double accuracy = 0.0;
  std::size_t labels = 0;
  std::size_t retrains = 0;
  double mean_training_units = 0.0;
};

struct SqueezeRow {
  PolicyId policy = PolicyId::Legilimens;
  std::uint64_t seed = 0;
  double factor = 1.0;
  double capacity = 0.0;
  double accuracy = 0.0;
  double training_fraction = 0.0;
  bool overloaded = false;
};

struct ConvergenceSeed {
  std::uint64_t seed = 0;
  std::vector<double> scene_distance;
  double first_mean = 0.0;  // mean over the first 5 scenes with a value
  double last_mean = 0.0;   // mean over the last 5
  std::optional<std::size_t> fresh_round;   // on the reuse stream, from scratch
  std::optional<std::size_t> reused_round;  // on the reuse stream, from the saved base
};

// Receives each finished run with its trace and script, for example to write
// per-run files; traces are not retained by the report.
using RunSink = std::function<void(const RunRecord&, const RunTrace&, const StreamScript&)>;

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<RunRecord> runs;
  std::vector<RampupSeed> rampup;
  std::vector<SegmentRow> segments;
  std::vector<AblationRow> ablation;
  std::vector<SqueezeRow> squeeze;
  std::vector<ConvergenceSeed> convergence;
};

// Study drivers for one seed. Each appends its runs to `report` and calls `sink`.
void run_plain(const ExperimentConfig& config, std::uint64_t seed, ExperimentReport& report, const RunSink& sink = {});
void run_rampup(const ExperimentConfig& config, std::uint64_t seed, ExperimentReport& report, const RunSink& sink = {});
void run_drift(const ExperimentConfig& config, std::uint64_t seed, ExperimentReport& report, const RunSink& sink = {});
void run_ablation(const ExperimentConfig& config, std::uint64_t seed, ExperimentReport& report,
                  const RunSink& sink = {});
void run_convergence(const ExperimentConfig& config, std::uint64_t seed, ExperimentReport& report,
                     const RunSink& sink = {});
void run_squeeze(const ExperimentConfig& config, std::uint64_t seed, ExperimentReport& report, const RunSink& sink = {});

// Runs every seed of the configured experiment.
ExperimentReport run_experiment(const ExperimentConfig& config, const RunSink& sink = {});

double median(std::vector<double> values);

}  // namespace edgecl
