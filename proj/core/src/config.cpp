#include "edgecl/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

namespace edgecl {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Run: return "run";
    case ExperimentKind::Rampup: return "rampup";
    case ExperimentKind::DriftRobustness: return "drift-robustness";
    case ExperimentKind::SamplerAblation: return "sampler-ablation";
    case ExperimentKind::BaseConvergence: return "base-convergence";
    case ExperimentKind::ComputeSqueeze: return "compute-squeeze";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto k : {ExperimentKind::Run, ExperimentKind::Rampup, ExperimentKind::DriftRobustness,
                 ExperimentKind::SamplerAblation, ExperimentKind::BaseConvergence, ExperimentKind::ComputeSqueeze}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown experiment '" + std::string(name) +
                    "' (valid: run, rampup, drift-robustness, sampler-ablation, base-convergence, compute-squeeze)");
}

void ScriptConfig::validate() const {
  if (!(rate > 0.0)) throw ConfigError("script.rate must be > 0");
  if (kind == ScriptKind::Family) {
    if (scenes < 1) throw ConfigError("script.scenes must be >= 1");
    if (!(scene_duration > 0.0)) throw ConfigError("script.scene_duration must be > 0");
    return;
  }
  if (segments.empty()) throw ConfigError("script.segments must not be empty");
  for (const auto& [tag, duration] : segments) {
    if (!(duration > 0.0)) throw ConfigError("script.segments: duration of '" + tag + "' must be > 0");
    const bool known = std::any_of(tags.begin(), tags.end(), [&](const auto& t) { return t.first == tag; });
    if (!known) throw ConfigError("script.segments: unknown tag '" + tag + "'");
  }
}

void ExperimentConfig::validate() const {
  try {
    pipeline.validate();
    world.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (world.num_classes != pipeline.model.num_classes || world.input_dim != pipeline.model.input_dim) {
    throw ConfigError("world.num_classes/input_dim must match model.num_classes/input_dim");
  }
  script.validate();
  if (warmup.scenes > 0 && !(warmup.scene_duration > 0.0)) throw ConfigError("warmup.scene_duration must be > 0");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (policies.empty()) throw ConfigError("at least one policy is required");
  if (study.budget_multipliers.empty() || study.capacity_factors.empty()) {
    throw ConfigError("study.budget_multipliers and study.capacity_factors must not be empty");
  }
  for (double m : study.budget_multipliers) {
    if (!(m > 0.0)) throw ConfigError("study.budget_multipliers must be > 0");
  }
  for (double f : study.capacity_factors) {
    if (!(f > 0.0)) throw ConfigError("study.capacity_factors must be > 0");
  }
  if (study.rampup_epochs < study.plateau_epochs || study.plateau_epochs < 1) {
    throw ConfigError("study.rampup_epochs must be >= study.plateau_epochs >= 1");
  }
  if (!(study.rampup_target > 0.0 && study.rampup_target <= 1.0)) throw ConfigError("study.rampup_target must be in (0, 1]");
  if (study.rampup_eval_items < 1) throw ConfigError("study.rampup_eval_items must be >= 1");
  if (!(study.window > 0.0)) throw ConfigError("study.window must be > 0");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

namespace {

// Reads keys from one table and remembers which were consumed so that
// misspelled keys are reported instead of silently ignored.
class Section {
 public:
  Section(const toml::table* table, std::string path) : table_(table), path_(std::move(path)) {}

  bool present() const { return table_ != nullptr; }
  const toml::table* table() const { return table_; }

  void get(std::string_view key, double& out) {
    if (auto* node = find(key)) {
      if (auto v = node->value<double>()) {
        out = *v;
      } else {
        fail(key, "a number");
      }
    }
  }
  void get(std::string_view key, std::size_t& out) {
    if (auto* node = find(key)) {
      auto v = node->as_integer();
      if (!v || v->get() < 0) fail(key, "a non-negative integer");
      out = static_cast<std::size_t>(v->get());
    }
  }
  void get(std::string_view key, bool& out) {
    if (auto* node = find(key)) {
      auto v = node->as_boolean();
      if (!v) fail(key, "a boolean");
      out = v->get();
    }
  }
  void get(std::string_view key, std::string& out) {
    if (auto* node = find(key)) {
      auto v = node->as_string();
      if (!v) fail(key, "a string");
      out = v->get();
    }
  }
  void get(std::string_view key, std::vector<double>& out) {
    if (auto* node = find(key)) {
      auto arr = node->as_array();
      if (!arr) fail(key, "an array of numbers");
      out.clear();
      for (const auto& el : *arr) {
        auto v = el.value<double>();
        if (!v) fail(key, "an array of numbers");
        out.push_back(*v);
      }
    }
  }

  const toml::node* raw(std::string_view key) { return find(key); }

  Section child(std::string_view key) {
    const toml::node* node = find(key);
    if (!node) return {nullptr, qualified(key)};
    if (!node->is_table()) fail(key, "a table");
    return {node->as_table(), qualified(key)};
  }

  void finish() const {
    if (!table_) return;
    for (const auto& [k, v] : *table_) {
      if (!used_.count(std::string(k.str()))) throw ConfigError("unknown key '" + qualified(k.str()) + "'");
    }
  }

  [[noreturn]] void fail(std::string_view key, std::string_view expected) const {
    throw ConfigError("'" + qualified(key) + "' must be " + std::string(expected));
  }

 private:
  const toml::node* find(std::string_view key) {
    if (!table_) return nullptr;
    const toml::node* node = table_->get(key);
    if (node) used_.insert(std::string(key));
    return node;
  }
  std::string qualified(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const toml::table* table_;
  std::string path_;
  std::set<std::string> used_;
};

void read_script(Section& s, ScriptConfig& script, const std::filesystem::path& base_dir);
void read_tags(const toml::table* script_table, ScriptConfig& script);

void read_script_table(Section& s, ScriptConfig& script, const std::filesystem::path& base_dir) {
  std::string file;
  s.get("file", file);
  if (!file.empty()) {
    std::filesystem::path path = file;
    if (path.is_relative()) path = base_dir / path;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open script file " + path.string());
    std::stringstream text;
    text << in.rdbuf();
    toml::table doc;
    try {
      doc = toml::parse(text.str(), path.string());
    } catch (const toml::parse_error& e) {
      std::ostringstream msg;
      msg << path.string() << ": " << e.description() << " (line " << e.source().begin.line << ")";
      throw ConfigError(msg.str());
    }
    Section root(&doc, "");
    auto inner = root.child("script");
    if (!inner.present()) throw ConfigError(path.string() + ": missing [script] table");
    read_script(inner, script, path.parent_path());
    inner.finish();
    root.finish();
  }
  read_script(s, script, base_dir);
}

void read_script(Section& s, ScriptConfig& script, const std::filesystem::path&) {
  std::string kind;
  s.get("kind", kind);
  if (kind == "family") {
    script.kind = ScriptKind::Family;
  } else if (kind == "stitched") {
    script.kind = ScriptKind::Stitched;
  } else if (!kind.empty()) {
    s.fail("kind", "\"family\" or \"stitched\"");
  }
  s.get("rate", script.rate);
  s.get("first_variant", script.first_variant);
  s.get("scenes", script.scenes);
  s.get("scene_duration", script.scene_duration);
  if (auto* node = s.raw("segments")) {
    auto arr = node->as_array();
    if (!arr) s.fail("segments", "an array of {tag, duration} tables");
    script.segments.clear();
    for (const auto& el : *arr) {
      auto t = el.as_table();
      if (!t) s.fail("segments", "an array of {tag, duration} tables");
      Section seg(t, "script.segments[]");
      std::string tag;
      double duration = 0.0;
      seg.get("tag", tag);
      seg.get("duration", duration);
      seg.finish();
      if (tag.empty()) throw ConfigError("script.segments[]: tag is required");
      script.segments.emplace_back(tag, duration);
    }
  }
  read_tags(s.table(), script);
  s.raw("tags");
}

// [script.tags] is a free-form map, so it is read without the unknown-key check.
void read_tags(const toml::table* script_table, ScriptConfig& script) {
  if (!script_table) return;
  const auto* node = script_table->get("tags");
  if (!node) return;
  const auto* tags = node->as_table();
  if (!tags) throw ConfigError("'script.tags' must be a table of tag = variant");
  script.tags.clear();
  for (const auto& [k, v] : *tags) {
    const std::string key = "script.tags." + std::string(k.str());
    auto count = [&](const toml::node* n, const std::string& what) {
      const auto* i = n ? n->as_integer() : nullptr;
      if (!i || i->get() < 0) throw ConfigError("'" + what + "' must be a non-negative integer");
      return static_cast<std::size_t>(i->get());
    };
    SceneRef ref;
    if (const auto* t = v.as_table()) {
      for (const auto& [field, unused] : *t) {
        if (field.str() != "family" && field.str() != "variant") {
          throw ConfigError("unknown key '" + key + "." + std::string(field.str()) + "'");
        }
      }
      if (t->contains("family")) ref.family = count(t->get("family"), key + ".family");
      ref.variant = count(t->get("variant"), key + ".variant");
    } else {
      ref.variant = count(&v, key);
    }
    script.tags.emplace_back(std::string(k.str()), ref);
  }
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    auto token = text.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    std::uint64_t value = 0;
    auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || end != token.data() + token.size()) {
      throw ConfigError("EDGECL_SEEDS: '" + std::string(token) + "' is not a non-negative integer");
    }
    seeds.push_back(value);
    pos = comma + 1;
  }
  return seeds;
}

}  // namespace

ExperimentConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir) {
  toml::table doc;
  try {
    doc = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML syntax error: " << e.description() << " (line " << e.source().begin.line << ", column "
        << e.source().begin.column << ")";
    throw ConfigError(msg.str());
  }

  ExperimentConfig c;
  std::string experiment;
  {
    Section probe(&doc, "");
    std::string preset_name;
    probe.get("preset", preset_name);
    if (!preset_name.empty()) c = preset(preset_name);
  }

  Section root(&doc, "");
  std::string ignored_preset;
  root.get("preset", ignored_preset);
  root.get("name", c.name);
  root.get("experiment", experiment);
  if (!experiment.empty()) c.kind = parse_experiment_kind(experiment);
  if (auto* node = root.raw("policies")) {
    auto arr = node->as_array();
    if (!arr || arr->empty()) root.fail("policies", "a non-empty array of policy names");
    c.policies.clear();
    for (const auto& el : *arr) {
      auto s = el.as_string();
      if (!s) root.fail("policies", "a non-empty array of policy names");
      try {
        c.policies.push_back(parse_policy(s->get()));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (auto* node = root.raw("seeds")) {
    auto arr = node->as_array();
    if (!arr) root.fail("seeds", "an array of non-negative integers");
    c.seeds.clear();
    for (const auto& el : *arr) {
      auto i = el.as_integer();
      if (!i || i->get() < 0) root.fail("seeds", "an array of non-negative integers");
      c.seeds.push_back(static_cast<std::uint64_t>(i->get()));
    }
  }
  std::string out;
  root.get("output_dir", out);
  if (!out.empty()) c.output_dir = out;
  root.get("write_traces", c.write_traces);
  root.get("family_id", c.family_id);

  auto& p = c.pipeline;
  {
    auto s = root.child("model");
    s.get("input_dim", p.model.input_dim);
    s.get("hidden_dim", p.model.hidden_dim);
    s.get("num_classes", p.model.num_classes);
    s.finish();
  }
  {
    auto s = root.child("sgd");
    s.get("learning_rate", p.sgd.learning_rate);
    s.get("minibatch_size", p.sgd.minibatch_size);
    s.finish();
  }
  {
    auto s = root.child("sampler");
    s.get("capacity", p.sampler.capacity);
    s.get("percentile", p.sampler.percentile);
    s.get("window_size", p.sampler.window_size);
    s.get("top_fraction", p.sampler.top_fraction);
    s.get("bootstrap_threshold", p.sampler.bootstrap_threshold);
    s.get("bootstrap_min", p.sampler.bootstrap_min);
    s.finish();
  }
  {
    auto s = root.child("stopping");
    s.get("w1", p.stopping.w1);
    s.get("w2", p.stopping.w2);
    s.get("tau_stop", p.stopping.tau_stop);
    s.get("max_epochs", p.stopping.max_epochs);
    s.get("delta_accuracy_floor", p.stopping.delta_accuracy_floor);
    s.get("drift_floor", p.stopping.drift_floor);
    std::string scope;
    s.get("drift_scope", scope);
    if (scope == "run") {
      p.stopping.drift_scope = DriftNormalizerScope::Run;
    } else if (scope == "session") {
      p.stopping.drift_scope = DriftNormalizerScope::Session;
    } else if (!scope.empty()) {
      s.fail("drift_scope", "\"run\" or \"session\"");
    }
    s.finish();
  }
  {
    auto s = root.child("ewma");
    s.get("similarity_threshold", p.ewma.similarity_threshold);
    s.get("eps_high", p.ewma.eps_high);
    s.get("eps_low", p.ewma.eps_low);
    s.finish();
  }
  {
    auto s = root.child("cost");
    s.get("inference_cost", p.cost.inference_cost);
    s.get("train_cost_per_item", p.cost.train_cost_per_item);
    s.get("epoch_overhead", p.cost.epoch_overhead);
    s.get("capacity", p.cost.capacity);
    s.finish();
  }
  {
    auto s = root.child("oracle");
    s.get("samples", p.oracle.samples);
    s.get("epochs", p.oracle.epochs);
    s.get("learning_rate", p.oracle.learning_rate);
    s.get("minibatch_size", p.oracle.minibatch_size);
    s.finish();
  }
  {
    auto s = root.child("pipeline");
    s.get("retrain_period", p.retrain_period);
    s.get("horizon", p.horizon);
    s.get("fixed_epochs", p.fixed_epochs);
    s.get("early_stopping", p.early_stopping);
    s.get("budget_multiplier", p.budget_multiplier);
    s.get("holdout_fraction", p.holdout_fraction);
    s.get("probe_size", p.probe_size);
    std::string selection, serving;
    s.get("selection", selection);
    if (selection == "scps_entropy") {
      p.selection = SelectionMode::ScpsEntropy;
    } else if (selection == "uniform") {
      p.selection = SelectionMode::Uniform;
    } else if (!selection.empty()) {
      s.fail("selection", "\"scps_entropy\" or \"uniform\"");
    }
    s.get("serving", serving);
    if (!serving.empty()) {
      try {
        p.serving_override = parse_serving_mode(serving);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("pipeline.serving: ") + e.what());
      }
    }
    s.finish();
  }
  {
    auto s = root.child("world");
    auto& w = c.world;
    s.get("separation", w.separation);
    s.get("noise", w.noise);
    s.get("family_offset", w.family_offset);
    s.get("scene_shift", w.scene_shift);
    s.get("scene_drift", w.scene_drift);
    s.get("drift_rank", w.drift_rank);
    s.get("prior_jitter", w.prior_jitter);
    s.finish();
  }
  c.world.num_classes = p.model.num_classes;
  c.world.input_dim = p.model.input_dim;
  {
    auto s = root.child("script");
    read_script_table(s, c.script, base_dir);
    s.finish();
  }
  {
    auto s = root.child("warmup");
    s.get("scenes", c.warmup.scenes);
    s.get("scene_duration", c.warmup.scene_duration);
    s.get("first_variant", c.warmup.first_variant);
    s.finish();
  }
  {
    auto s = root.child("study");
    auto& st = c.study;
    s.get("budget_multipliers", st.budget_multipliers);
    s.get("capacity_factors", st.capacity_factors);
    s.get("rampup_epochs", st.rampup_epochs);
    s.get("rampup_eval_items", st.rampup_eval_items);
    s.get("rampup_target", st.rampup_target);
    s.get("plateau_epochs", st.plateau_epochs);
    s.get("convergence_epochs", st.convergence_epochs);
    s.get("reuse_first_variant", st.reuse_first_variant);
    s.get("window", st.window);
    s.finish();
  }
  root.finish();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void apply_env_overrides(ExperimentConfig& config) {
  if (const char* dir = std::getenv("EDGECL_OUTPUT_DIR"); dir && *dir) config.output_dir = dir;
  if (const char* seeds = std::getenv("EDGECL_SEEDS"); seeds && *seeds) config.seeds = parse_seed_list(seeds);
}

std::vector<std::uint64_t> seed_range(std::size_t n) {
  std::vector<std::uint64_t> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i + 1;
  return s;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"rampup", "drift-robustness", "sampler-ablation", "base-convergence",
                                              "compute-squeeze"};
  return names;
}

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig c;
  c.name = std::string(name);
  c.output_dir = std::filesystem::path("edgecl-out") / std::string(name);
  if (name == "rampup") {
    c.kind = ExperimentKind::Rampup;
    c.policies = {PolicyId::Legilimens, PolicyId::Ekya};
    c.seeds = seed_range(10);
    c.script.scenes = 20;
    c.script.scene_duration = 90.0;
    c.warmup.scenes = 40;
  } else if (name == "drift-robustness") {
    c.kind = ExperimentKind::DriftRobustness;
    c.policies = {PolicyId::Legilimens, PolicyId::StaticEwma, PolicyId::VanillaFull};
    c.seeds = seed_range(20);
    c.script.kind = ScriptKind::Stitched;
    c.script.segments = {{"S1", 30.0}, {"S2", 30.0}, {"S1", 30.0}, {"S3", 30.0}, {"S3", 30.0}};
    // S1 comes from the warmed-up family; S2 and S3 from families never seen before.
    c.script.tags = {{"S1", {std::nullopt, 0}}, {"S2", {1, 0}}, {"S3", {2, 0}}};
    c.pipeline.retrain_period = 10.0;
    c.warmup.scenes = 40;
  } else if (name == "sampler-ablation") {
    c.kind = ExperimentKind::SamplerAblation;
    c.policies = {PolicyId::Legilimens};
    c.seeds = seed_range(10);
    c.script.scenes = 6;
    c.script.scene_duration = 90.0;
    c.warmup.scenes = 40;
  } else if (name == "base-convergence") {
    c.kind = ExperimentKind::BaseConvergence;
    c.policies = {PolicyId::Legilimens};
    c.seeds = seed_range(10);
    c.script.scenes = 20;
    c.script.scene_duration = 90.0;
  } else if (name == "compute-squeeze") {
    c.kind = ExperimentKind::ComputeSqueeze;
    c.policies = {PolicyId::Legilimens, PolicyId::Ekya};
    c.seeds = seed_range(20);
    c.script.scenes = 6;
    c.script.scene_duration = 90.0;
    c.pipeline.cost.capacity = 400.0;
    c.warmup.scenes = 40;
  } else {
    std::string valid;
    for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + std::string(name) + "' (valid: " + valid + ")");
  }
  c.validate();
  return c;
}

namespace {

std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

template <typename T, typename F>
std::string list(const std::vector<T>& v, F render) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + render(v[i]);
  return out + "]";
}

}  // namespace

std::string to_toml(const ExperimentConfig& c) {
  const auto& p = c.pipeline;
  std::ostringstream o;
  o << "name = " << quote(c.name) << "\n";
  o << "experiment = " << quote(to_string(c.kind)) << "\n";
  o << "policies = " << list(c.policies, [](PolicyId id) { return quote(to_string(id)); }) << "\n";
  o << "seeds = " << list(c.seeds, [](std::uint64_t s) { return std::to_string(s); }) << "\n";
  o << "output_dir = " << quote(c.output_dir.generic_string()) << "\n";
  o << "write_traces = " << (c.write_traces ? "true" : "false") << "\n";
  o << "family_id = " << c.family_id << "\n";
  o << "\n[model]\ninput_dim = " << p.model.input_dim << "\nhidden_dim = " << p.model.hidden_dim
    << "\nnum_classes = " << p.model.num_classes << "\n";
  o << "\n[sgd]\nlearning_rate = " << num(p.sgd.learning_rate) << "\nminibatch_size = " << p.sgd.minibatch_size << "\n";
  o << "\n[sampler]\ncapacity = " << p.sampler.capacity << "\npercentile = " << num(p.sampler.percentile)
    << "\nwindow_size = " << p.sampler.window_size << "\ntop_fraction = " << num(p.sampler.top_fraction)
    << "\nbootstrap_threshold = " << num(p.sampler.bootstrap_threshold)
    << "\nbootstrap_min = " << p.sampler.bootstrap_min << "\n";
  o << "\n[stopping]\nw1 = " << num(p.stopping.w1) << "\nw2 = " << num(p.stopping.w2)
    << "\ntau_stop = " << num(p.stopping.tau_stop) << "\nmax_epochs = " << p.stopping.max_epochs
    << "\ndelta_accuracy_floor = " << num(p.stopping.delta_accuracy_floor)
    << "\ndrift_floor = " << num(p.stopping.drift_floor) << "\ndrift_scope = "
    << quote(p.stopping.drift_scope == DriftNormalizerScope::Run ? "run" : "session") << "\n";
  o << "\n[ewma]\nsimilarity_threshold = " << num(p.ewma.similarity_threshold)
    << "\neps_high = " << num(p.ewma.eps_high) << "\neps_low = " << num(p.ewma.eps_low) << "\n";
  o << "\n[cost]\ninference_cost = " << num(p.cost.inference_cost)
    << "\ntrain_cost_per_item = " << num(p.cost.train_cost_per_item)
    << "\nepoch_overhead = " << num(p.cost.epoch_overhead) << "\ncapacity = " << num(p.cost.capacity) << "\n";
  o << "\n[oracle]\nsamples = " << p.oracle.samples << "\nepochs = " << p.oracle.epochs
    << "\nlearning_rate = " << num(p.oracle.learning_rate) << "\nminibatch_size = " << p.oracle.minibatch_size << "\n";
  o << "\n[pipeline]\nretrain_period = " << num(p.retrain_period) << "\nhorizon = " << num(p.horizon)
    << "\nfixed_epochs = " << p.fixed_epochs << "\nearly_stopping = " << (p.early_stopping ? "true" : "false")
    << "\nselection = " << quote(p.selection == SelectionMode::ScpsEntropy ? "scps_entropy" : "uniform")
    << "\nbudget_multiplier = " << num(p.budget_multiplier) << "\nholdout_fraction = " << num(p.holdout_fraction)
    << "\nprobe_size = " << p.probe_size << "\n";
  if (p.serving_override) o << "serving = " << quote(to_string(*p.serving_override)) << "\n";
  const auto& w = c.world;
  o << "\n[world]\nseparation = " << num(w.separation) << "\nnoise = " << num(w.noise)
    << "\nfamily_offset = " << num(w.family_offset) << "\nscene_shift = " << num(w.scene_shift)
    << "\nscene_drift = " << num(w.scene_drift) << "\ndrift_rank = " << w.drift_rank
    << "\nprior_jitter = " << num(w.prior_jitter) << "\n";
  const auto& s = c.script;
  o << "\n[script]\nkind = " << quote(s.kind == ScriptKind::Family ? "family" : "stitched")
    << "\nrate = " << num(s.rate) << "\nfirst_variant = " << s.first_variant << "\nscenes = " << s.scenes
    << "\nscene_duration = " << num(s.scene_duration) << "\n";
  if (!s.segments.empty()) {
    o << "segments = " << list(s.segments, [](const auto& seg) {
      return "{ tag = " + quote(seg.first) + ", duration = " + num(seg.second) + " }";
    }) << "\n";
  }
  if (!s.tags.empty()) {
    o << "\n[script.tags]\n";
    for (const auto& [tag, ref] : s.tags) {
      o << quote(tag) << " = ";
      if (ref.family) {
        o << "{ family = " << *ref.family << ", variant = " << ref.variant << " }\n";
      } else {
        o << ref.variant << "\n";
      }
    }
  }
  o << "\n[warmup]\nscenes = " << c.warmup.scenes << "\nscene_duration = " << num(c.warmup.scene_duration)
    << "\nfirst_variant = " << c.warmup.first_variant << "\n";
  const auto& st = c.study;
  o << "\n[study]\nbudget_multipliers = " << list(st.budget_multipliers, num)
    << "\ncapacity_factors = " << list(st.capacity_factors, num) << "\nrampup_epochs = " << st.rampup_epochs
    << "\nrampup_eval_items = " << st.rampup_eval_items << "\nrampup_target = " << num(st.rampup_target)
    << "\nplateau_epochs = " << st.plateau_epochs << "\nconvergence_epochs = " << st.convergence_epochs
    << "\nreuse_first_variant = " << st.reuse_first_variant << "\nwindow = " << num(st.window) << "\n";
  return o.str();
}

}  // namespace edgecl
