#include "edgecl/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>

namespace edgecl {

void CostModel::validate() const {
  if (!(inference_cost >= 0.0) || !(train_cost_per_item >= 0.0) || !(epoch_overhead >= 0.0)) {
    throw std::invalid_argument("CostModel: costs must be >= 0");
  }
  if (!(capacity > 0.0)) throw std::invalid_argument("CostModel: capacity must be > 0");
}

std::string_view to_string(LaneTag tag) {
  switch (tag) {
    case LaneTag::Inference: return "INFERENCE";
    case LaneTag::Training: return "TRAINING";
    case LaneTag::Idle: return "IDLE";
  }
  return "UNKNOWN";
}

std::string_view to_string(ServePath p) {
  switch (p) {
    case ServePath::Gpu: return "gpu";
    case ServePath::CpuStale: return "cpu_stale";
    case ServePath::Unserved: return "unserved";
  }
  return "unknown";
}

void GpuTimeline::push(double start, double end, LaneTag tag, std::string annotation) {
  if (!(end >= start)) throw std::logic_error("GpuTimeline::push: interval ends before it starts");
  if (!intervals_.empty() && start != intervals_.back().end) {
    throw std::logic_error("GpuTimeline::push: interval is not contiguous with the timeline");
  }
  if (intervals_.empty() && start != 0.0) throw std::logic_error("GpuTimeline::push: timeline must start at 0");
  if (end == start) return;
  if (!intervals_.empty() && intervals_.back().tag == tag && intervals_.back().annotation == annotation) {
    intervals_.back().end = end;
    return;
  }
  intervals_.push_back({start, end, tag, std::move(annotation)});
}

double GpuTimeline::total(LaneTag tag) const {
  double sum = 0.0;
  for (const auto& iv : intervals_) {
    if (iv.tag == tag) sum += iv.length();
  }
  return sum;
}

bool GpuTimeline::covers(double horizon) const {
  if (horizon == 0.0) return intervals_.empty();
  if (intervals_.empty() || intervals_.front().start != 0.0 || intervals_.back().end != horizon) return false;
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (!(intervals_[i].end > intervals_[i].start)) return false;
    if (i > 0 && intervals_[i].start != intervals_[i - 1].end) return false;
  }
  return true;
}

void StoppingParams::validate() const {
  if (!(w1 >= 0.0) || !(w2 >= 0.0)) throw std::invalid_argument("StoppingParams: weights must be >= 0");
  if (max_epochs < 1) throw std::invalid_argument("StoppingParams: max_epochs must be >= 1");
  if (!(delta_accuracy_floor > 0.0) || !(drift_floor > 0.0)) {
    throw std::invalid_argument("StoppingParams: floors must be > 0");
  }
  if (!std::isfinite(tau_stop)) throw std::invalid_argument("StoppingParams: tau_stop must be finite");
}

double stopping_score(double delta_accuracy, double delta_accuracy_max, double drift, double drift_max,
                      const StoppingParams& params) {
  return params.w1 * (delta_accuracy / delta_accuracy_max) - params.w2 * (drift / drift_max);
}

void DriftMonitorState::begin(std::optional<Embedding> reference_centroid) {
  reference = std::move(reference_centroid);
  incoming_sum.clear();
  incoming_count = 0;
}

DriftSample drift_measure(DriftMonitorState state, std::span<const Embedding> new_embeddings) {
  for (const auto& e : new_embeddings) {
    if (state.incoming_sum.empty()) state.incoming_sum.assign(e.size(), 0.0);
    if (e.size() != state.incoming_sum.size()) throw std::invalid_argument("drift_measure: embedding dimension mismatch");
    for (std::size_t i = 0; i < e.size(); ++i) state.incoming_sum[i] += e[i];
    ++state.incoming_count;
  }
  double drift = 0.0;
  if (state.reference && state.incoming_count > 0) {
    if (state.reference->size() != state.incoming_sum.size()) {
      throw std::invalid_argument("drift_measure: reference dimension mismatch");
    }
    // The mean and the sum point the same way, so the sum is enough for the cosine.
    const double ref_norm = std::sqrt(std::inner_product(state.reference->begin(), state.reference->end(),
                                                         state.reference->begin(), 0.0));
    const double in_norm = std::sqrt(std::inner_product(state.incoming_sum.begin(), state.incoming_sum.end(),
                                                        state.incoming_sum.begin(), 0.0));
    if (ref_norm > 0.0 && in_norm > 0.0) drift = 1.0 - cosine_similarity(*state.reference, state.incoming_sum);
  }
  state.drift_max = std::max(state.drift_max, drift);
  return {drift, std::move(state)};
}

namespace {

std::size_t holdout_count(std::size_t n, double fraction) {
  if (n < 2) return 0;
  auto h = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  return std::clamp<std::size_t>(h, 1, n - 1);
}

}  // namespace

std::pair<std::vector<DataItem>, std::vector<DataItem>> split_holdout(std::span<const DataItem> items,
                                                                      double holdout_fraction, std::uint64_t seed) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto rng = make_rng(seed, {seed_tag::kHoldout});
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t h = holdout_count(items.size(), holdout_fraction);
  std::vector<DataItem> train, holdout;
  for (std::size_t i = 0; i < order.size(); ++i) (i < h ? holdout : train).push_back(items[order[i]]);
  return {std::move(train), std::move(holdout)};
}

RetrainResult retrain_with_early_stop(const ModelWeights& init, std::span<const DataItem> labeled,
                                      const RetrainOptions& options, DriftMonitorState monitor,
                                      const DriftFeed& feed, std::uint64_t seed) {
  options.stopping.validate();
  RetrainResult result{init, {}, std::move(monitor)};
  auto& session = result.session;
  session.selected_size = labeled.size();
  session.early_stopping = options.early_stopping;
  const std::size_t cap = options.early_stopping ? options.stopping.max_epochs : options.epoch_budget;
  if (labeled.size() < 2 || cap == 0) {
    session.skipped = true;
    return result;
  }
  if (options.stopping.drift_scope == DriftNormalizerScope::Session) result.monitor.drift_max = 0.0;

  auto [train, holdout] = split_holdout(labeled, options.holdout_fraction, seed);
  session.train_size = train.size();
  session.holdout_size = holdout.size();
  session.initial_accuracy = *accuracy(init, holdout);

  auto rng = make_rng(seed, {seed_tag::kShuffle});
  const auto& sp = options.stopping;
  double previous = session.initial_accuracy;
  double best_gain = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t <= cap; ++t) {
    auto epoch = sgd_epoch(result.zeta, train, options.sgd, holdout, rng);
    result.zeta = std::move(epoch.weights);

    EpochRecord rec;
    rec.epoch = t;
    rec.accuracy = *epoch.holdout_accuracy;
    rec.delta_accuracy = rec.accuracy - previous;
    best_gain = std::max(best_gain, rec.delta_accuracy);
    rec.delta_accuracy_max = std::max(sp.delta_accuracy_floor, best_gain);

    const auto observed = feed ? feed(t) : std::vector<Embedding>{};
    auto sample = drift_measure(std::move(result.monitor), observed);
    result.monitor = std::move(sample.state);
    rec.drift = sample.drift;
    rec.drift_max = std::max(sp.drift_floor, result.monitor.drift_max);

    rec.score = stopping_score(rec.delta_accuracy, rec.delta_accuracy_max, rec.drift, rec.drift_max, sp);
    rec.halted = (options.early_stopping && rec.score <= sp.tau_stop) || t == cap;
    previous = rec.accuracy;
    session.epochs.push_back(rec);
    if (rec.halted) break;
  }
  return result;
}

void PipelineConfig::validate() const {
  model.validate();
  sampler.validate();
  stopping.validate();
  ewma.validate();
  cost.validate();
  if (!(sgd.learning_rate >= 0.0) || sgd.minibatch_size < 1) throw std::invalid_argument("PipelineConfig: bad SGD options");
  if (!(retrain_period > 0.0)) throw std::invalid_argument("PipelineConfig: retrain_period must be > 0");
  if (!(horizon >= 0.0)) throw std::invalid_argument("PipelineConfig: horizon must be >= 0");
  if (!(budget_multiplier > 0.0)) throw std::invalid_argument("PipelineConfig: budget_multiplier must be > 0");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw std::invalid_argument("PipelineConfig: holdout_fraction must be in (0, 1)");
  }
  if (probe_size < 1) throw std::invalid_argument("PipelineConfig: probe_size must be >= 1");
}

double RunTrace::overall_accuracy() const {
  if (items.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& r : items) correct += r.correct ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(items.size());
}

double RunTrace::training_fraction() const {
  return horizon > 0.0 ? timeline.total(LaneTag::Training) / horizon : 0.0;
}

RunTrace run_pipeline(const StreamScript& script, PolicyId policy, const PipelineConfig& config, std::uint64_t seed,
                      const InitialState& initial) {
  return run_pipeline(script, policy_traits(policy, config.ewma), config, seed, initial);
}

namespace {

// Discrete-event simulation of one run. The GPU lane is advanced explicitly;
// the CPU lane (sampler, drift monitor, base update) is cost-free and runs
// inline at the instants its inputs become available.
class Simulation {
 public:
  Simulation(const StreamScript& script, const PolicyTraits& traits, const PipelineConfig& config,
             std::uint64_t seed, const InitialState& initial)
      : script_(script), traits_(traits), config_(config), seed_(seed), buffer_(config.sampler) {
    config_.validate();
    script_.validate();
    const auto& first = script_.segments.front().scene;
    if (first.input_dim() != config_.model.input_dim || first.num_classes() != config_.model.num_classes) {
      throw std::invalid_argument("run_pipeline: script dimensions do not match the model config");
    }
    horizon_ = config_.horizon > 0.0 ? config_.horizon : script_.total_duration();
    serving_ = config_.serving_override.value_or(traits_.serving);

    auto all = sample_stream(script_, seed_);
    for (auto& item : all) {
      if (item.arrival_time < horizon_) stream_.push_back(std::move(item));
    }

    trace_.policy = traits_.id;
    trace_.seed = seed_;
    trace_.horizon = horizon_;
    trace_.overloaded = config_.cost.inference_cost * script_.rate > config_.cost.capacity;
    for (std::size_t s = 0; s < script_.segments.size(); ++s) trace_.segment_starts.push_back(script_.segment_start(s));
    trace_.items.resize(stream_.size());
    offered_.assign(stream_.size(), false);
    for (std::size_t i = 0; i < stream_.size(); ++i) {
      auto& r = trace_.items[i];
      r.index = stream_[i].index;
      r.arrival_time = stream_[i].arrival_time;
      r.scene_id = stream_[i].scene_id;
      r.segment = script_.segment_at(r.arrival_time);
      r.label = stream_[i].label;
    }

    if (initial.base && !(initial.base->phi.config() == config_.model)) {
      throw std::invalid_argument("run_pipeline: initial base does not match the model config");
    }
    if (traits_.ewma) base_ = initial.base;
    if (initial.deployed) {
      deployed_ = *initial.deployed;
    } else if (initial.base) {
      deployed_ = initial.base->phi;
    } else {
      auto rng = make_rng(seed_, {seed_tag::kModelInit});
      deployed_ = ModelWeights::random(config_.model, rng);
    }
    if (!(deployed_.config() == config_.model)) throw std::invalid_argument("run_pipeline: deployed model shape mismatch");

    for (const auto& seg : script_.segments) {
      if (probes_.count(seg.scene.scene_id)) continue;
      probes_[seg.scene.scene_id] =
          sample_scene(seg.scene, config_.probe_size, derive_seed(seed_, {seed_tag::kProbe, seg.scene.scene_id}));
      global_probe_.insert(global_probe_.end(), probes_[seg.scene.scene_id].begin(),
                           probes_[seg.scene.scene_id].end());
    }

    if (traits_.offline_oracle) {
      for (const auto& seg : script_.segments) {
        if (!oracle_models_.count(seg.scene.scene_id)) {
          oracle_models_.emplace(seg.scene.scene_id,
                                 train_oracle_model(seg.scene, config_.model, config_.oracle, seed_));
        }
      }
    }
  }

  RunTrace run() {
    next_trigger_ = traits_.offline_oracle ? std::numeric_limits<double>::infinity() : config_.retrain_period;
    const double inference_seconds = config_.cost.seconds(config_.cost.inference_cost);
    while (gpu_ < horizon_) {
      while (next_ < stream_.size() && stream_[next_].arrival_time <= gpu_) queue_.push_back(next_++);
      if (next_trigger_ <= gpu_) {
        retrain();
        continue;
      }
      if (!queue_.empty()) {
        const double end = gpu_ + inference_seconds;
        if (end > next_trigger_ && next_trigger_ < horizon_) {
          // An item that would overrun the retrain boundary is left for later.
          trace_.timeline.push(gpu_, next_trigger_, LaneTag::Idle);
          gpu_ = next_trigger_;
          continue;
        }
        if (end > horizon_) {
          trace_.timeline.push(gpu_, horizon_, LaneTag::Inference);
          gpu_ = horizon_;
          break;
        }
        const std::size_t idx = queue_.front();
        queue_.pop_front();
        serve(idx, end, ServePath::Gpu);
        trace_.timeline.push(gpu_, end, LaneTag::Inference);
        gpu_ = end;
        continue;
      }
      double until = std::min(horizon_, next_trigger_);
      if (next_ < stream_.size()) until = std::min(until, stream_[next_].arrival_time);
      trace_.timeline.push(gpu_, until, LaneTag::Idle);
      gpu_ = until;
    }

    for (const auto& r : trace_.items) {
      if (r.path == ServePath::Unserved) ++trace_.queued_at_horizon;
    }
    trace_.final_base = base_;
    trace_.final_deployed = deployed_;
    return std::move(trace_);
  }

 private:
  const ModelWeights& serving_model(std::size_t idx) const {
    if (traits_.offline_oracle) return oracle_models_.at(stream_[idx].scene_id);
    return deployed_;
  }

  void serve(std::size_t idx, double when, ServePath path) {
    const auto& item = stream_[idx];
    const auto out = forward(serving_model(idx), item.features);
    auto& rec = trace_.items[idx];
    rec.served_time = when;
    rec.path = path;
    rec.predicted = out.prediction.predicted_class;
    rec.correct = rec.predicted == rec.label;
    ++trace_.served;
    if (traits_.offline_oracle || offered_[idx]) return;
    offer(idx, out.embedding);
  }

  void offer(std::size_t idx, const Embedding& embedding) {
    const auto& item = stream_[idx];
    offered_[idx] = true;
    const bool accepted = buffer_.offer(item, embedding);
    const auto& o = buffer_.offers().back();
    trace_.sampler.push_back({round_ + 1, item.index, item.arrival_time, o.min_distance, o.threshold, accepted, false});
    window_items_.push_back(item);
    window_embeddings_.push_back(embedding);
  }

  void retrain() {
    const double trigger = next_trigger_;
    const double t0 = gpu_;
    ++round_;
    if (serving_ == ServingMode::StaleServe) {
      for (auto idx : queue_) serve(idx, t0, ServePath::CpuStale);
      queue_.clear();
    }

    // Queued items belong to this window even though they have not been served
    // yet: embed them with the deployed model so the sampler sees them.
    double t = t0;
    if (serving_ == ServingMode::QueueReplay) {
      std::size_t embedded = 0;
      for (auto idx : queue_) {
        if (offered_[idx]) continue;
        offer(idx, forward(deployed_, stream_[idx].features).embedding);
        ++embedded;
      }
      if (embedded > 0) {
        const double end = t + config_.cost.seconds(config_.cost.inference_cost * static_cast<double>(embedded));
        push_clamped(t, end, LaneTag::Training, "embed-backlog");
        t = end;
      }
    }

    std::vector<BufferEntry> snapshot(buffer_.entries().begin(), buffer_.entries().end());
    buffer_.clear();
    auto window_items = std::move(window_items_);
    auto window_embeddings = std::move(window_embeddings_);
    window_items_.clear();
    window_embeddings_.clear();

    const std::size_t segment = window_segment(window_items, t0);
    const std::size_t scene_id = script_.segments[segment].scene.scene_id;

    bool cold_start = false;
    ModelWeights init = deployed_;
    if (traits_.init == InitSource::Base) {
      if (base_) {
        init = base_->phi;
      } else {
        cold_start = true;
      }
    }

    std::vector<DataItem> selected;
    if (config_.selection == SelectionMode::ScpsEntropy) {
      if (!snapshot.empty()) {
        selected = prioritize(snapshot, init, config_.sampler.top_fraction);
        const double end = t + config_.cost.seconds(config_.cost.inference_cost * static_cast<double>(snapshot.size()));
        push_clamped(t, end, LaneTag::Training, "prioritize");
        t = end;
      }
    } else {
      const auto budget = static_cast<std::size_t>(
          std::ceil(config_.sampler.top_fraction * static_cast<double>(snapshot.size())));
      const auto count = static_cast<std::size_t>(std::llround(static_cast<double>(budget) * config_.budget_multiplier));
      auto rng = make_rng(seed_, {seed_tag::kUniformSample, round_});
      selected = uniform_sample(window_items, count, rng);
    }
    mark_selected(selected);
    const auto labeled = label(selected, trace_.ledger);

    RetrainOptions options;
    options.stopping = config_.stopping;
    options.sgd = config_.sgd;
    options.holdout_fraction = config_.holdout_fraction;
    options.early_stopping = traits_.stopping == StoppingRule::Score && config_.early_stopping && !cold_start;
    options.epoch_budget = traits_.stopping == StoppingRule::FixedEpochs ? config_.fixed_epochs : config_.stopping.max_epochs;

    const std::size_t n_hold = labeled.size() < 2 ? 0 : split_holdout(labeled, config_.holdout_fraction, 0).second.size();
    const std::size_t n_train = labeled.size() - n_hold;
    const double epoch_units = config_.cost.train_cost_per_item * static_cast<double>(n_train) +
                               config_.cost.inference_cost * static_cast<double>(n_hold) + config_.cost.epoch_overhead;
    const double epoch_seconds = config_.cost.seconds(epoch_units);
    const double train_start = t;

    std::optional<Embedding> reference;
    if (!window_embeddings.empty()) reference = centroid(window_embeddings);
    monitor_.begin(reference);

    std::size_t drift_next = next_;
    const DriftFeed feed = [&](std::size_t epoch) {
      const double until = std::min(horizon_, train_start + static_cast<double>(epoch) * epoch_seconds);
      std::vector<Embedding> seen;
      while (drift_next < stream_.size() && stream_[drift_next].arrival_time < until) {
        seen.push_back(forward(deployed_, stream_[drift_next].features).embedding);
        ++drift_next;
      }
      return seen;
    };

    auto result = retrain_with_early_stop(init, labeled, options, monitor_, feed, derive_seed(seed_, {round_}));
    monitor_ = std::move(result.monitor);
    auto session = std::move(result.session);
    session.round = round_;
    session.trigger_time = trigger;
    session.start_time = train_start;
    session.cold_start = cold_start;
    session.scene_id = scene_id;
    session.initial = init;
    for (const auto& item : labeled) session.selected.push_back(item.index);
    for (auto& e : session.epochs) {
      e.start_time = train_start + static_cast<double>(e.epoch - 1) * epoch_seconds;
      e.end_time = train_start + static_cast<double>(e.epoch) * epoch_seconds;
    }
    const double train_end = train_start + static_cast<double>(session.epochs.size()) * epoch_seconds;
    session.end_time = train_end;
    session.compute_units = static_cast<double>(session.epochs.size()) * epoch_units;
    session.truncated = train_end > horizon_;
    push_clamped(train_start, train_end, LaneTag::Training, "retrain");

    const double busy_until = std::min(std::max(t, train_end), horizon_);
    while (next_ < stream_.size() && stream_[next_].arrival_time < busy_until) {
      if (serving_ == ServingMode::StaleServe) {
        serve(next_, stream_[next_].arrival_time, ServePath::CpuStale);
      } else {
        queue_.push_back(next_);
      }
      ++next_;
    }
    gpu_ = std::max(gpu_, busy_until);

    if (!session.skipped && !session.truncated) {
      const ModelWeights previous = deployed_;
      deployed_ = result.zeta;
      session.deployed = deployed_;
      std::optional<double> similarity, epsilon;
      if (traits_.ewma && reference) {
        if (!base_) {
          base_ = BaseModelState{deployed_, reference, 0, {}};
        } else {
          *base_ = update_base(std::move(*base_), deployed_, *reference, *traits_.ewma, scene_id);
          similarity = base_->history.back().similarity;
          epsilon = base_->history.back().epsilon;
        }
      }
      record_centroids(segment, scene_id, trigger, init, cold_start, previous, similarity, epsilon);
    }
    trace_.sessions.push_back(std::move(session));
    next_trigger_ = trigger + config_.retrain_period;
  }

  // The segment contributing most items to the window (later segment on ties);
  // with an empty window, the segment active just before `t`.
  std::size_t window_segment(const std::vector<DataItem>& items, double t) const {
    if (items.empty()) return script_.segment_at(std::max(0.0, t - 1e-9));
    std::map<std::size_t, std::size_t> counts;
    for (const auto& item : items) ++counts[script_.segment_at(item.arrival_time)];
    std::size_t best = counts.begin()->first;
    for (const auto& [seg, n] : counts) {
      if (n >= counts[best]) best = seg;
    }
    return best;
  }

  void push_clamped(double start, double end, LaneTag tag, const char* annotation) {
    start = std::min(start, horizon_);
    end = std::min(end, horizon_);
    trace_.timeline.push(start, end, tag, annotation);
  }

  void mark_selected(const std::vector<DataItem>& selected) {
    std::vector<std::size_t> ids;
    for (const auto& s : selected) ids.push_back(s.index);
    std::sort(ids.begin(), ids.end());
    for (auto& rec : trace_.sampler) {
      if (rec.round == round_ && std::binary_search(ids.begin(), ids.end(), rec.item_index)) rec.selected = true;
    }
  }

  void record_centroids(std::size_t segment, std::size_t scene_id, double time, const ModelWeights& init,
                        bool cold_start, const ModelWeights& previous, std::optional<double> similarity,
                        std::optional<double> epsilon) {
    const auto& probe = probes_.at(scene_id);
    CentroidRecord rec;
    rec.round = round_;
    rec.time = time;
    rec.scene_id = scene_id;
    rec.segment = segment;
    rec.similarity = similarity;
    rec.epsilon = epsilon;
    rec.specialized_centroid = probe_centroid(deployed_, probe);
    rec.prior_specialized_distance = euclidean_distance(probe_centroid(previous, probe), rec.specialized_centroid);
    if (traits_.init == InitSource::Base && !cold_start) {
      rec.base_centroid = probe_centroid(init, probe);
      rec.base_specialized_distance = euclidean_distance(rec.base_centroid, rec.specialized_centroid);
    }
    if (!own_scene_centroids_.empty()) {
      Embedding prior_mean = centroid(own_scene_centroids_);
      rec.new_scene_vs_prior = euclidean_distance(rec.specialized_centroid, prior_mean);
    }
    own_scene_centroids_.push_back(rec.specialized_centroid);
    global_specialized_.push_back(probe_centroid(deployed_, global_probe_));
    if (base_) {
      rec.base_to_mean_distance =
          euclidean_distance(probe_centroid(base_->phi, global_probe_), centroid(global_specialized_));
    }
    trace_.centroids.push_back(std::move(rec));
  }

  const StreamScript& script_;
  PolicyTraits traits_;
  PipelineConfig config_;
  std::uint64_t seed_;
  double horizon_ = 0.0;
  ServingMode serving_ = ServingMode::StaleServe;

  std::vector<DataItem> stream_;
  std::size_t next_ = 0;
  std::deque<std::size_t> queue_;
  std::vector<bool> offered_;
  double gpu_ = 0.0;
  double next_trigger_ = 0.0;
  std::size_t round_ = 0;

  CandidateBuffer buffer_;
  std::vector<DataItem> window_items_;
  std::vector<Embedding> window_embeddings_;
  DriftMonitorState monitor_;

  ModelWeights deployed_;
  std::optional<BaseModelState> base_;
  std::map<std::size_t, ModelWeights> oracle_models_;
  std::map<std::size_t, std::vector<DataItem>> probes_;
  std::vector<DataItem> global_probe_;
  std::vector<Embedding> own_scene_centroids_;
  std::vector<Embedding> global_specialized_;

  RunTrace trace_;
};

}  // namespace

RunTrace run_pipeline(const StreamScript& script, const PolicyTraits& traits, const PipelineConfig& config,
                      std::uint64_t seed, const InitialState& initial) {
  return Simulation(script, traits, config, seed, initial).run();
}

}  // namespace edgecl
