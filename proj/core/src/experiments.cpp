#include "edgecl/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace edgecl {

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

SceneSpec world_backbone(const ExperimentConfig& config, std::uint64_t seed) {
  return family_backbone(seed, config.family_id, config.world);
}

StreamScript build_family_script(const ExperimentConfig& config, std::uint64_t seed, std::size_t first_variant,
                                 std::size_t count, double scene_duration) {
  return family_script(world_backbone(config, seed), seed, first_variant, count, scene_duration, config.script.rate,
                       config.world);
}

StreamScript build_script(const ExperimentConfig& config, std::uint64_t seed) {
  const auto& s = config.script;
  if (s.kind == ScriptKind::Family) {
    return build_family_script(config, seed, s.first_variant, s.scenes, s.scene_duration);
  }
  std::map<std::string, SceneSpec> library;
  for (const auto& [tag, ref] : s.tags) {
    const auto backbone = family_backbone(seed, ref.family.value_or(config.family_id), config.world);
    library[tag] = family_scene(backbone, seed, ref.variant, config.world);
  }
  return stitched_script(s.segments, library, s.rate);
}

StreamScript build_warmup_script(const ExperimentConfig& config, std::uint64_t seed) {
  return build_family_script(config, seed, config.warmup.first_variant, config.warmup.scenes,
                             config.warmup.scene_duration);
}

std::optional<WarmState> warm_up(const ExperimentConfig& config, std::uint64_t seed) {
  if (config.warmup.scenes == 0) return std::nullopt;
  const auto script = build_warmup_script(config, seed);
  PipelineConfig pc = config.pipeline;
  pc.horizon = 0.0;
  auto trace = run_pipeline(script, PolicyId::Legilimens, pc, derive_seed(seed, {seed_tag::kWarmup}));
  if (!trace.final_base) throw std::runtime_error("warm_up: the warmup run produced no base");
  return WarmState{std::move(*trace.final_base), std::move(trace.final_deployed)};
}

InitialState initial_state(PolicyId policy, const std::optional<WarmState>& warm) {
  InitialState init;
  if (!warm) return init;
  init.deployed = warm->deployed;
  if (policy_traits(policy).ewma) init.base = warm->base;
  return init;
}

std::size_t epochs_to_target(const std::vector<double>& curve, double target, std::size_t plateau_epochs) {
  if (curve.empty()) return 0;
  const std::size_t k = std::min(plateau_epochs, curve.size());
  double plateau = 0.0;
  for (std::size_t i = curve.size() - k; i < curve.size(); ++i) plateau += curve[i];
  plateau /= static_cast<double>(k);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i] >= target * plateau) return i;
  }
  return curve.size();
}

RunMetrics compute_metrics(const RunTrace& trace, const StreamScript& script, const MetricsOptions& options) {
  RunMetrics m;
  m.overall_accuracy = trace.overall_accuracy();
  m.training_fraction = trace.training_fraction();
  m.training_seconds = trace.timeline.total(LaneTag::Training);
  m.labels = trace.ledger.total;
  m.served = trace.served;
  m.queued_at_horizon = trace.queued_at_horizon;
  m.overloaded = trace.overloaded;

  const auto windows = static_cast<std::size_t>(std::ceil(trace.horizon / options.window));
  std::vector<std::size_t> hits(windows, 0), counts(windows, 0);
  for (const auto& r : trace.items) {
    const auto w = std::min(windows - 1, static_cast<std::size_t>(r.arrival_time / options.window));
    ++counts[w];
    hits[w] += r.correct ? 1 : 0;
  }
  for (std::size_t w = 0; w < windows; ++w) {
    m.windowed_accuracy.push_back(counts[w] ? static_cast<double>(hits[w]) / static_cast<double>(counts[w])
                                            : std::numeric_limits<double>::quiet_NaN());
  }

  double epochs = 0.0, units = 0.0;
  for (const auto& s : trace.sessions) {
    if (s.skipped) continue;
    ++m.retrains;
    epochs += static_cast<double>(s.epoch_count());
    units += s.compute_units;
    if (!m.convergence_round && s.early_stopping && !s.cold_start && s.epoch_count() <= options.convergence_epochs) {
      m.convergence_round = s.round;
    }
  }
  if (m.retrains) {
    m.mean_epochs = epochs / static_cast<double>(m.retrains);
    m.mean_training_units = units / static_cast<double>(m.retrains);
  }

  const std::size_t n_seg = script.segments.size();
  m.segments.resize(n_seg);
  std::vector<std::size_t> seg_hits(n_seg, 0);
  for (std::size_t s = 0; s < n_seg; ++s) {
    auto& sm = m.segments[s];
    sm.segment = s;
    sm.tag = script.segments[s].tag;
    sm.scene_id = script.segments[s].scene.scene_id;
    sm.start = script.segment_start(s);
    sm.end = std::min(trace.horizon, sm.start + script.segments[s].duration);
  }
  for (const auto& r : trace.items) {
    ++m.segments[r.segment].items;
    seg_hits[r.segment] += r.correct ? 1 : 0;
  }
  for (std::size_t s = 0; s < n_seg; ++s) {
    auto& sm = m.segments[s];
    if (sm.items) sm.accuracy = static_cast<double>(seg_hits[s]) / static_cast<double>(sm.items);
    for (const auto& iv : trace.timeline.intervals()) {
      if (iv.tag != LaneTag::Training) continue;
      sm.training_seconds += std::max(0.0, std::min(iv.end, sm.end) - std::max(iv.start, sm.start));
    }
  }

  m.scene_base_distance.assign(n_seg, std::numeric_limits<double>::quiet_NaN());
  std::vector<bool> seen(n_seg, false);
  for (const auto& c : trace.centroids) {
    if (c.base_to_mean_distance) m.base_to_mean_distance.push_back(*c.base_to_mean_distance);
    if (c.segment < n_seg && !seen[c.segment]) {
      seen[c.segment] = true;
      if (c.base_specialized_distance) m.scene_base_distance[c.segment] = *c.base_specialized_distance;
    }
  }
  return m;
}

std::string RunRecord::id() const {
  std::string s(to_string(policy));
  if (!variant.empty()) s += "-" + variant;
  return s + "-seed" + std::to_string(seed);
}

namespace {

MetricsOptions metrics_options(const ExperimentConfig& config) {
  return {config.study.window, config.study.convergence_epochs};
}

std::string format_factor(double f) {
  std::ostringstream o;
  o << f;
  return o.str();
}

RunTrace execute(const ExperimentConfig& config, const StreamScript& script, PolicyId policy,
                 const PipelineConfig& pc, std::uint64_t seed, const InitialState& init, std::string variant,
                 ExperimentReport& report, const RunSink& sink) {
  auto trace = run_pipeline(script, policy, pc, seed, init);
  RunRecord rec{policy, std::move(variant), seed, compute_metrics(trace, script, metrics_options(config))};
  if (sink) sink(rec, trace, script);
  report.runs.push_back(std::move(rec));
  return trace;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Holdout accuracy after each of `epochs` epochs (entry 0: before training).
std::vector<double> rampup_curve(ModelWeights w, std::span<const DataItem> train, std::span<const DataItem> eval,
                                 const SgdOptions& sgd, std::size_t epochs, std::uint64_t seed) {
  std::vector<double> curve{*accuracy(w, eval)};
  auto rng = make_rng(seed, {seed_tag::kShuffle});
  for (std::size_t e = 0; e < epochs; ++e) {
    w = sgd_epoch(w, train, sgd, {}, rng).weights;
    curve.push_back(*accuracy(w, eval));
  }
  return curve;
}

}  // namespace

void run_plain(const ExperimentConfig& config, std::uint64_t seed, ExperimentReport& report, const RunSink& sink) {
  const auto script = build_script(config, seed);
  const auto warm = warm_up(config, seed);
  for (auto policy : config.policies) {
    execute(config, script, policy, config.pipeline, seed, initial_state(policy, warm), "", report, sink);
  }
}

void run_rampup(const ExperimentConfig& config, std::uint64_t seed, ExperimentReport& report, const RunSink& sink) {
  const auto script = build_script(config, seed);
  const auto warm = warm_up(config, seed);
  const auto meta = execute(config, script, PolicyId::Legilimens, config.pipeline, seed,
                            initial_state(PolicyId::Legilimens, warm), "", report, sink);
  const auto ekya = execute(config, script, PolicyId::Ekya, config.pipeline, seed, initial_state(PolicyId::Ekya, warm),
                            "", report, sink);
  const auto stream = sample_stream(script, seed);
  const auto& st = config.study;

  RampupSeed out;
  out.seed = seed;
  std::map<std::size_t, std::size_t> ekya_round;
  for (std::size_t i = 0; i < ekya.sessions.size(); ++i) ekya_round[ekya.sessions[i].round] = i;
  for (std::size_t i = 1; i < meta.sessions.size(); ++i) {
    const auto& s = meta.sessions[i];
    // Scene-change rounds only: the first retrain whose window lies in a new scene.
    if (s.skipped || s.cold_start || s.scene_id == meta.sessions[i - 1].scene_id || !s.initial) continue;
    auto e = ekya_round.find(s.round);
    if (e == ekya_round.end() || !ekya.sessions[e->second].initial) continue;

    std::vector<DataItem> selected;
    for (auto idx : s.selected) selected.push_back(stream.at(idx));
    if (selected.size() < 2) continue;
    const auto curve_seed = derive_seed(seed, {seed_tag::kRampup, s.round});
    auto train = split_holdout(selected, config.pipeline.holdout_fraction, curve_seed).first;
    const auto& scene = script.segments[script.segment_at(stream.at(s.selected.front()).arrival_time)].scene;
    const auto eval = sample_scene(scene, st.rampup_eval_items, derive_seed(curve_seed, {seed_tag::kProbe}));

    RampupCurve c;
    c.seed = seed;
    c.round = s.round;
    c.scene_id = s.scene_id;
    c.selected = selected.size();
    c.meta = rampup_curve(*s.initial, train, eval, config.pipeline.sgd, st.rampup_epochs, curve_seed);
    c.ekya = rampup_curve(*ekya.sessions[e->second].initial, train, eval, config.pipeline.sgd, st.rampup_epochs,
                          curve_seed);
    c.meta_epochs = epochs_to_target(c.meta, st.rampup_target, st.plateau_epochs);
    c.ekya_epochs = epochs_to_target(c.ekya, st.rampup_target, st.plateau_epochs);
    out.curves.push_back(std::move(c));
  }
  std::vector<double> me, ee;
  for (const auto& c : out.curves) {
    me.push_back(static_cast<double>(c.meta_epochs));
    ee.push_back(static_cast<double>(c.ekya_epochs));
  }
  out.meta_mean_epochs = mean_of(me);
  out.ekya_mean_epochs = mean_of(ee);
  report.rampup.push_back(std::move(out));
}

void run_drift(const ExperimentConfig& config, std::uint64_t seed, ExperimentReport& report, const RunSink& sink) {
  const auto script = build_script(config, seed);
  const auto warm = warm_up(config, seed);
  for (auto policy : config.policies) {
    execute(config, script, policy, config.pipeline, seed, initial_state(policy, warm), "", report, sink);
    for (const auto& seg : report.runs.back().metrics.segments) report.segments.push_back({policy, seed, seg});
  }
}

void run_ablation(const ExperimentConfig& config, std::uint64_t seed, ExperimentReport& report,
                  const RunSink& sink) {
  const auto script = build_script(config, seed);
  const auto warm = warm_up(config, seed);
  for (auto policy : config.policies) {
    auto add = [&](SelectionMode mode, double multiplier, std::string variant) {
      PipelineConfig pc = config.pipeline;
      pc.selection = mode;
      pc.budget_multiplier = multiplier;
      execute(config, script, policy, pc, seed, initial_state(policy, warm), variant, report, sink);
      const auto& m = report.runs.back().metrics;
      report.ablation.push_back(
          {policy, seed, variant, mode, multiplier, m.overall_accuracy, m.labels, m.retrains, m.mean_training_units});
    };
    add(SelectionMode::ScpsEntropy, 1.0, "scps");
    for (double mult : config.study.budget_multipliers) {
      add(SelectionMode::Uniform, mult, "uniform_x" + format_factor(mult));
    }
  }
}

void run_convergence(const ExperimentConfig& config, std::uint64_t seed, ExperimentReport& report,
                     const RunSink& sink) {
  const auto script = build_script(config, seed);
  const auto warm = warm_up(config, seed);
  const auto reuse = build_family_script(config, seed, config.study.reuse_first_variant, config.script.scenes,
                                         config.script.scene_duration);
  for (auto policy : config.policies) {
    if (!policy_traits(policy).ewma) continue;
    const auto first = execute(config, script, policy, config.pipeline, seed, initial_state(policy, warm), "", report,
                               sink);
    ConvergenceSeed out;
    out.seed = seed;
    for (double d : report.runs.back().metrics.scene_base_distance) {
      if (!std::isnan(d)) out.scene_distance.push_back(d);
    }
    const std::size_t k = std::min<std::size_t>(5, out.scene_distance.size());
    if (k > 0) {
      out.first_mean = mean_of({out.scene_distance.begin(), out.scene_distance.begin() + static_cast<long>(k)});
      out.last_mean = mean_of({out.scene_distance.end() - static_cast<long>(k), out.scene_distance.end()});
    }

    execute(config, reuse, policy, config.pipeline, seed, {}, "fresh", report, sink);
    out.fresh_round = report.runs.back().metrics.convergence_round;
    if (first.final_base) {
      // Round-trip through the persisted artifact, as a later deployment would.
      InitialState init;
      init.base = load_base(save_base(*first.final_base), config.pipeline.model);
      execute(config, reuse, policy, config.pipeline, seed, init, "reused", report, sink);
      out.reused_round = report.runs.back().metrics.convergence_round;
    }
    report.convergence.push_back(std::move(out));
  }
}

void run_squeeze(const ExperimentConfig& config, std::uint64_t seed, ExperimentReport& report, const RunSink& sink) {
  const auto script = build_script(config, seed);
  const auto warm = warm_up(config, seed);
  for (auto policy : config.policies) {
    for (double f : config.study.capacity_factors) {
      PipelineConfig pc = config.pipeline;
      pc.cost.capacity = config.pipeline.cost.capacity * f;
      execute(config, script, policy, pc, seed, initial_state(policy, warm), "cap_x" + format_factor(f), report, sink);
      const auto& m = report.runs.back().metrics;
      report.squeeze.push_back({policy, seed, f, pc.cost.capacity, m.overall_accuracy, m.training_fraction, m.overloaded});
    }
  }
}

ExperimentReport run_experiment(const ExperimentConfig& config, const RunSink& sink) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  for (auto seed : config.seeds) {
    switch (config.kind) {
      case ExperimentKind::Run: run_plain(config, seed, report, sink); break;
      case ExperimentKind::Rampup: run_rampup(config, seed, report, sink); break;
      case ExperimentKind::DriftRobustness: run_drift(config, seed, report, sink); break;
      case ExperimentKind::SamplerAblation: run_ablation(config, seed, report, sink); break;
      case ExperimentKind::BaseConvergence: run_convergence(config, seed, report, sink); break;
      case ExperimentKind::ComputeSqueeze: run_squeeze(config, seed, report, sink); break;
    }
  }
  return report;
}

}  // namespace edgecl
