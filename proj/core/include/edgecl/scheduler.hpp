#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edgecl/meta_update.hpp"
#include "edgecl/model.hpp"
#include "edgecl/policy.hpp"
#include "edgecl/sampler.hpp"
#include "edgecl/stream.hpp"

namespace edgecl {

// Compute units and the rate at which the single serialized queue retires them.
struct CostModel {
  double inference_cost = 1.0;       // per item
  double train_cost_per_item = 3.0;  // per training item per epoch
  double epoch_overhead = 0.0;       // per epoch
  double capacity = 200.0;           // units per simulated second; +inf is allowed

  void validate() const;
  double seconds(double units) const { return units / capacity; }
};

enum class LaneTag { Inference, Training, Idle };
std::string_view to_string(LaneTag tag);

struct Interval {
  double start = 0.0;
  double end = 0.0;
  LaneTag tag = LaneTag::Idle;
  std::string annotation;

  double length() const { return end - start; }
};

// Ordered intervals of the one accelerator queue. Adjacent intervals with the
// same tag and annotation are merged; zero-length intervals are dropped.
class GpuTimeline {
 public:
  void push(double start, double end, LaneTag tag, std::string annotation = {});

  const std::vector<Interval>& intervals() const { return intervals_; }
  double total(LaneTag tag) const;
  double end() const { return intervals_.empty() ? 0.0 : intervals_.back().end; }

  // Sorted, non-overlapping and contiguous over [0, horizon].
  bool covers(double horizon) const;

 private:
  std::vector<Interval> intervals_;
};

enum class DriftNormalizerScope { Session, Run };

struct StoppingParams {
  double w1 = 1.0;
  double w2 = 1.0;
  double tau_stop = 0.1;
  std::size_t max_epochs = 30;
  double delta_accuracy_floor = 1e-3;
  double drift_floor = 1e-3;
  DriftNormalizerScope drift_scope = DriftNormalizerScope::Run;

  void validate() const;
};

// w1 * dA/dA_max - w2 * D/D_max; the normalizers must already be floored.
double stopping_score(double delta_accuracy, double delta_accuracy_max, double drift, double drift_max,
                      const StoppingParams& params);

struct DriftMonitorState {
  std::optional<Embedding> reference;
  Embedding incoming_sum;
  std::size_t incoming_count = 0;
  double drift_max = 0.0;  // running max of raw drift values (unfloored)

  // Starts a new retraining window against `reference` (nullopt: no reference available).
  void begin(std::optional<Embedding> reference_centroid);
};

struct DriftSample {
  double drift = 0.0;
  DriftMonitorState state;
};

// Folds `new_embeddings` into the incoming centroid and returns
// D = 1 - cos(reference, incoming centroid). D = 0 until something has arrived.
DriftSample drift_measure(DriftMonitorState state, std::span<const Embedding> new_embeddings);

struct EpochRecord {
  std::size_t epoch = 0;
  double accuracy = 0.0;
  double delta_accuracy = 0.0;
  double delta_accuracy_max = 0.0;  // floored
  double drift = 0.0;
  double drift_max = 0.0;  // floored
  double score = 0.0;
  bool halted = false;
  double start_time = 0.0;
  double end_time = 0.0;
};

struct RetrainSession {
  std::size_t round = 0;
  double trigger_time = 0.0;
  double start_time = 0.0;
  double end_time = 0.0;
  std::size_t selected_size = 0;
  std::size_t train_size = 0;
  std::size_t holdout_size = 0;
  double initial_accuracy = 0.0;
  std::vector<EpochRecord> epochs;
  bool skipped = false;
  bool cold_start = false;
  bool truncated = false;  // cut off by the horizon, model not deployed
  bool early_stopping = true;
  double compute_units = 0.0;
  std::size_t scene_id = 0;
  std::optional<ModelWeights> initial;   // the weights training started from
  std::optional<ModelWeights> deployed;  // the specialized model put into service
  std::vector<std::size_t> selected;     // stream indices of the labeled items

  std::size_t epoch_count() const { return epochs.size(); }
};

struct RetrainOptions {
  StoppingParams stopping;
  SgdOptions sgd;
  bool early_stopping = true;     // false: run exactly `epoch_budget` epochs
  std::size_t epoch_budget = 30;  // used when early_stopping is false
  double holdout_fraction = 0.2;
};

// Receives the epoch number (1-based) and returns the embeddings the drift
// monitor observed while that epoch was running.
using DriftFeed = std::function<std::vector<Embedding>(std::size_t epoch)>;

struct RetrainResult {
  ModelWeights zeta;
  RetrainSession session;
  DriftMonitorState monitor;
};

// Deterministic 80/20 split keyed by `seed`: returns (train, holdout).
std::pair<std::vector<DataItem>, std::vector<DataItem>> split_holdout(std::span<const DataItem> items,
                                                                      double holdout_fraction, std::uint64_t seed);

// Specializes from `init` epoch by epoch, halting on the first epoch whose
// stopping score is <= tau_stop (or at the epoch cap).
RetrainResult retrain_with_early_stop(const ModelWeights& init, std::span<const DataItem> labeled,
                                      const RetrainOptions& options, DriftMonitorState monitor,
                                      const DriftFeed& feed, std::uint64_t seed);

enum class SelectionMode { ScpsEntropy, Uniform };

struct PipelineConfig {
  ModelConfig model;
  SgdOptions sgd;
  SamplerConfig sampler;
  StoppingParams stopping;
  EwmaPolicy ewma;
  CostModel cost;
  OracleOptions oracle;
  double retrain_period = 30.0;
  double horizon = 0.0;  // 0: the script's duration
  std::size_t fixed_epochs = 20;
  bool early_stopping = true;
  SelectionMode selection = SelectionMode::ScpsEntropy;
  double budget_multiplier = 1.0;
  std::optional<ServingMode> serving_override;
  double holdout_fraction = 0.2;
  std::size_t probe_size = 64;

  void validate() const;
};

// Where the run starts from: an existing base (for example a reused or warmed
// up one) and the model deployed at t = 0.
struct InitialState {
  std::optional<BaseModelState> base;
  std::optional<ModelWeights> deployed;
};

enum class ServePath { Gpu, CpuStale, Unserved };
std::string_view to_string(ServePath p);

struct ItemRecord {
  std::size_t index = 0;
  double arrival_time = 0.0;
  double served_time = std::numeric_limits<double>::quiet_NaN();
  std::size_t scene_id = 0;
  std::size_t segment = 0;
  std::size_t label = 0;
  std::size_t predicted = 0;
  bool correct = false;
  ServePath path = ServePath::Unserved;
};

struct CentroidRecord {
  std::size_t round = 0;
  double time = 0.0;
  std::size_t scene_id = 0;
  std::size_t segment = 0;
  std::optional<double> similarity;
  std::optional<double> epsilon;
  std::optional<double> base_specialized_distance;   // init base vs new specialized, scene probe
  std::optional<double> prior_specialized_distance;  // previous specialized vs new specialized
  std::optional<double> base_to_mean_distance;       // updated base vs mean specialized centroid
  std::optional<double> new_scene_vs_prior;          // new scene centroid vs mean of prior scenes
  Embedding base_centroid;
  Embedding specialized_centroid;
};

struct SamplerRecord {
  std::size_t round = 0;
  std::size_t item_index = 0;
  double arrival_time = 0.0;
  std::optional<double> min_distance;
  double threshold = 0.0;
  bool accepted = false;
  bool selected = false;
};

struct RunTrace {
  PolicyId policy = PolicyId::Legilimens;
  std::uint64_t seed = 0;
  double horizon = 0.0;
  std::vector<ItemRecord> items;
  GpuTimeline timeline;
  std::vector<RetrainSession> sessions;
  LabelLedger ledger;
  std::vector<CentroidRecord> centroids;
  std::vector<SamplerRecord> sampler;
  std::optional<BaseModelState> final_base;
  ModelWeights final_deployed;
  std::vector<double> segment_starts;
  bool overloaded = false;
  std::size_t served = 0;
  std::size_t dropped = 0;
  std::size_t queued_at_horizon = 0;

  double overall_accuracy() const;
  double training_fraction() const;
};

RunTrace run_pipeline(const StreamScript& script, PolicyId policy, const PipelineConfig& config, std::uint64_t seed,
                      const InitialState& initial = {});

// Same, with explicit traits (lets tests and ablations vary one policy axis).
RunTrace run_pipeline(const StreamScript& script, const PolicyTraits& traits, const PipelineConfig& config,
                      std::uint64_t seed, const InitialState& initial = {});

}  // namespace edgecl
