#include "edgecl/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace edgecl {

using json = nlohmann::ordered_json;

const std::vector<CsvSchema>& csv_schemas() {
  static const std::vector<CsvSchema> schemas{
      {"items.csv", {"index", "arrival_time", "served_time", "scene_id", "segment", "label", "predicted", "correct", "path"}},
      {"timeline.csv", {"start", "end", "tag", "annotation"}},
      {"sessions.csv",
       {"round", "trigger_time", "start_time", "end_time", "scene_id", "selected_size", "train_size", "holdout_size",
        "initial_accuracy", "skipped", "cold_start", "truncated", "early_stopping", "compute_units", "epoch",
        "accuracy", "delta_accuracy", "delta_accuracy_max", "drift", "drift_max", "score", "halted", "epoch_start",
        "epoch_end"}},
      {"sampler.csv", {"round", "item_index", "arrival_time", "min_distance", "threshold", "accepted", "selected"}},
      {"centroids.csv",
       {"round", "time", "scene_id", "segment", "similarity", "epsilon", "base_specialized_distance",
        "prior_specialized_distance", "base_to_mean_distance", "new_scene_vs_prior", "base_centroid",
        "specialized_centroid"}},
      {"runs.csv",
       {"run_id", "policy", "variant", "seed", "overall_accuracy", "training_fraction", "training_seconds", "labels",
        "retrains", "mean_epochs", "mean_training_units", "convergence_round", "served", "queued_at_horizon",
        "overloaded"}},
      {"windows.csv", {"run_id", "policy", "variant", "seed", "window", "start", "accuracy"}},
      {"rampup.csv", {"seed", "round", "scene_id", "selected", "init", "epoch", "accuracy"}},
      {"segments.csv",
       {"policy", "seed", "segment", "tag", "scene_id", "start", "end", "items", "accuracy", "training_seconds"}},
      {"ablation.csv",
       {"policy", "seed", "variant", "selection", "budget_multiplier", "accuracy", "labels", "retrains",
        "mean_training_units"}},
      {"squeeze.csv", {"policy", "seed", "factor", "capacity", "accuracy", "training_fraction", "overloaded"}},
      {"convergence.csv", {"seed", "first_mean", "last_mean", "ratio", "fresh_round", "reused_round"}},
      {"scene_distance.csv", {"seed", "scene", "distance"}},
  };
  return schemas;
}

const CsvSchema& csv_schema(std::string_view file) {
  for (const auto& s : csv_schemas()) {
    if (s.file == file) return s;
  }
  throw std::invalid_argument("csv_schema: unknown file " + std::string(file));
}

std::string schema_json() {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["run_files"] = {"summary.json", "items.csv", "timeline.csv", "sessions.csv", "sampler.csv", "centroids.csv"};
  doc["experiment_files"] = {"summary.json", "runs.csv", "windows.csv", "rampup.csv", "segments.csv",
                             "ablation.csv", "squeeze.csv", "convergence.csv", "scene_distance.csv"};
  json files = json::object();
  for (const auto& s : csv_schemas()) files[s.file] = s.columns;
  doc["csv"] = files;
  return doc.dump(2);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace {

std::string num(std::optional<double> v) { return v ? format_number(*v) : ""; }
const char* flag(bool b) { return b ? "1" : "0"; }

std::string vec(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_number(v[i]);
  return s;
}

void header(std::ostream& out, std::string_view file) {
  const auto& cols = csv_schema(file).columns;
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json metrics_json(const RunMetrics& m) {
  json j;
  j["overall_accuracy"] = m.overall_accuracy;
  j["training_fraction"] = m.training_fraction;
  j["training_seconds"] = m.training_seconds;
  j["labels"] = m.labels;
  j["retrains"] = m.retrains;
  j["mean_epochs"] = m.mean_epochs;
  j["mean_training_units"] = m.mean_training_units;
  j["convergence_round"] = optional_json(m.convergence_round);
  j["served"] = m.served;
  j["queued_at_horizon"] = m.queued_at_horizon;
  j["overloaded"] = m.overloaded;
  json w = json::array();
  for (double a : m.windowed_accuracy) w.push_back(number_or_null(a));
  j["windowed_accuracy"] = w;
  json segs = json::array();
  for (const auto& s : m.segments) {
    segs.push_back({{"segment", s.segment}, {"tag", s.tag}, {"scene_id", s.scene_id}, {"start", s.start},
                    {"end", s.end}, {"items", s.items}, {"accuracy", s.accuracy},
                    {"training_seconds", s.training_seconds}});
  }
  j["segments"] = segs;
  json d = json::array();
  for (double x : m.scene_base_distance) d.push_back(number_or_null(x));
  j["scene_base_distance"] = d;
  j["base_to_mean_distance"] = m.base_to_mean_distance;
  return j;
}

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_items_csv(std::ostream& out, const RunTrace& trace) {
  header(out, "items.csv");
  for (const auto& r : trace.items) {
    out << r.index << ',' << format_number(r.arrival_time) << ',' << format_number(r.served_time) << ','
        << r.scene_id << ',' << r.segment << ',' << r.label << ',';
    if (r.path != ServePath::Unserved) out << r.predicted;
    out << ',' << flag(r.correct) << ',' << to_string(r.path) << '\n';
  }
}

void write_timeline_csv(std::ostream& out, const RunTrace& trace) {
  header(out, "timeline.csv");
  for (const auto& iv : trace.timeline.intervals()) {
    out << format_number(iv.start) << ',' << format_number(iv.end) << ',' << to_string(iv.tag) << ','
        << iv.annotation << '\n';
  }
}

void write_sessions_csv(std::ostream& out, const RunTrace& trace) {
  header(out, "sessions.csv");
  for (const auto& s : trace.sessions) {
    std::string prefix = std::to_string(s.round) + ',' + format_number(s.trigger_time) + ',' +
                         format_number(s.start_time) + ',' + format_number(s.end_time) + ',' +
                         std::to_string(s.scene_id) + ',' + std::to_string(s.selected_size) + ',' +
                         std::to_string(s.train_size) + ',' + std::to_string(s.holdout_size) + ',' +
                         format_number(s.initial_accuracy) + ',' + flag(s.skipped) + ',' + flag(s.cold_start) + ',' +
                         flag(s.truncated) + ',' + flag(s.early_stopping) + ',' + format_number(s.compute_units);
    if (s.epochs.empty()) {
      out << prefix << ",,,,,,,,,,\n";
      continue;
    }
    for (const auto& e : s.epochs) {
      out << prefix << ',' << e.epoch << ',' << format_number(e.accuracy) << ',' << format_number(e.delta_accuracy)
          << ',' << format_number(e.delta_accuracy_max) << ',' << format_number(e.drift) << ','
          << format_number(e.drift_max) << ',' << format_number(e.score) << ',' << flag(e.halted) << ','
          << format_number(e.start_time) << ',' << format_number(e.end_time) << '\n';
    }
  }
}

void write_sampler_csv(std::ostream& out, const RunTrace& trace) {
  header(out, "sampler.csv");
  for (const auto& r : trace.sampler) {
    out << r.round << ',' << r.item_index << ',' << format_number(r.arrival_time) << ',' << num(r.min_distance)
        << ',' << format_number(r.threshold) << ',' << flag(r.accepted) << ',' << flag(r.selected) << '\n';
  }
}

void write_centroids_csv(std::ostream& out, const RunTrace& trace) {
  header(out, "centroids.csv");
  for (const auto& c : trace.centroids) {
    out << c.round << ',' << format_number(c.time) << ',' << c.scene_id << ',' << c.segment << ','
        << num(c.similarity) << ',' << num(c.epsilon) << ',' << num(c.base_specialized_distance) << ','
        << num(c.prior_specialized_distance) << ',' << num(c.base_to_mean_distance) << ','
        << num(c.new_scene_vs_prior) << ',' << vec(c.base_centroid) << ',' << vec(c.specialized_centroid) << '\n';
  }
}

std::string run_summary_json(const RunRecord& record, const RunTrace& trace) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["run_id"] = record.id();
  j["policy"] = std::string(to_string(record.policy));
  j["variant"] = record.variant;
  j["seed"] = record.seed;
  j["horizon"] = trace.horizon;
  j["items"] = trace.items.size();
  j["dropped"] = trace.dropped;
  j["label_ledger"] = {{"total", trace.ledger.total}, {"per_round", trace.ledger.per_round}};
  j["metrics"] = metrics_json(record.metrics);
  if (trace.final_base) {
    json hist = json::array();
    for (const auto& h : trace.final_base->history) {
      hist.push_back({{"scene_id", h.scene_id}, {"similarity", optional_json(h.similarity)}, {"epsilon", h.epsilon}});
    }
    j["base_updates"] = hist;
  }
  return j.dump(2) + "\n";
}

void write_run(const std::filesystem::path& dir, const RunRecord& record, const RunTrace& trace) {
  const auto run_dir = dir / "runs" / record.id();
  std::filesystem::create_directories(run_dir);
  open(run_dir / "summary.json") << run_summary_json(record, trace);
  {
    auto f = open(run_dir / "items.csv");
    write_items_csv(f, trace);
  }
  {
    auto f = open(run_dir / "timeline.csv");
    write_timeline_csv(f, trace);
  }
  {
    auto f = open(run_dir / "sessions.csv");
    write_sessions_csv(f, trace);
  }
  {
    auto f = open(run_dir / "sampler.csv");
    write_sampler_csv(f, trace);
  }
  {
    auto f = open(run_dir / "centroids.csv");
    write_centroids_csv(f, trace);
  }
}

RunSink trace_writer(const std::filesystem::path& dir) {
  return [dir](const RunRecord& record, const RunTrace& trace, const StreamScript&) { write_run(dir, record, trace); };
}

std::string report_summary_json(const ExperimentReport& report) {
  const auto& c = report.config;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = c.name;
  j["experiment"] = std::string(to_string(c.kind));
  j["seeds"] = c.seeds;
  json pols = json::array();
  for (auto p : c.policies) pols.push_back(std::string(to_string(p)));
  j["policies"] = pols;
  j["config"] = to_toml(c);

  json runs = json::array();
  for (const auto& r : report.runs) {
    json e = metrics_json(r.metrics);
    runs.push_back({{"run_id", r.id()}, {"policy", std::string(to_string(r.policy))}, {"variant", r.variant},
                    {"seed", r.seed}, {"metrics", e}});
  }
  j["runs"] = runs;

  // Medians across seeds per (policy, variant).
  std::map<std::string, std::vector<double>> acc, frac;
  for (const auto& r : report.runs) {
    std::string key = std::string(to_string(r.policy)) + (r.variant.empty() ? "" : "-" + r.variant);
    acc[key].push_back(r.metrics.overall_accuracy);
    frac[key].push_back(r.metrics.training_fraction);
  }
  json agg = json::object();
  for (const auto& [key, v] : acc) {
    agg[key] = {{"median_accuracy", median(v)}, {"median_training_fraction", median(frac[key])}, {"runs", v.size()}};
  }
  j["aggregate"] = agg;

  if (!report.rampup.empty()) {
    json r = json::array();
    std::vector<double> me, ee;
    for (const auto& s : report.rampup) {
      r.push_back({{"seed", s.seed}, {"curves", s.curves.size()}, {"meta_mean_epochs", number_or_null(s.meta_mean_epochs)},
                   {"ekya_mean_epochs", number_or_null(s.ekya_mean_epochs)}});
      me.push_back(s.meta_mean_epochs);
      ee.push_back(s.ekya_mean_epochs);
    }
    j["rampup"] = {{"per_seed", r}, {"median_meta_epochs", number_or_null(median(me))},
                   {"median_ekya_epochs", number_or_null(median(ee))}};
  }
  if (!report.convergence.empty()) {
    json r = json::array();
    for (const auto& s : report.convergence) {
      r.push_back({{"seed", s.seed}, {"first_mean", s.first_mean}, {"last_mean", s.last_mean},
                   {"fresh_round", optional_json(s.fresh_round)}, {"reused_round", optional_json(s.reused_round)}});
    }
    j["convergence"] = r;
  }
  return j.dump(2) + "\n";
}

void write_report(const std::filesystem::path& dir, const ExperimentReport& report) {
  std::filesystem::create_directories(dir);
  open(dir / "summary.json") << report_summary_json(report);
  {
    auto f = open(dir / "runs.csv");
    header(f, "runs.csv");
    for (const auto& r : report.runs) {
      const auto& m = r.metrics;
      f << r.id() << ',' << to_string(r.policy) << ',' << r.variant << ',' << r.seed << ','
        << format_number(m.overall_accuracy) << ',' << format_number(m.training_fraction) << ','
        << format_number(m.training_seconds) << ',' << m.labels << ',' << m.retrains << ','
        << format_number(m.mean_epochs) << ',' << format_number(m.mean_training_units) << ',';
      if (m.convergence_round) f << *m.convergence_round;
      f << ',' << m.served << ',' << m.queued_at_horizon << ',' << flag(m.overloaded) << '\n';
    }
  }
  {
    auto f = open(dir / "windows.csv");
    header(f, "windows.csv");
    const double w = report.config.study.window;
    for (const auto& r : report.runs) {
      for (std::size_t i = 0; i < r.metrics.windowed_accuracy.size(); ++i) {
        f << r.id() << ',' << to_string(r.policy) << ',' << r.variant << ',' << r.seed << ',' << i << ','
          << format_number(static_cast<double>(i) * w) << ',' << format_number(r.metrics.windowed_accuracy[i]) << '\n';
      }
    }
  }
  if (!report.rampup.empty()) {
    auto f = open(dir / "rampup.csv");
    header(f, "rampup.csv");
    for (const auto& s : report.rampup) {
      for (const auto& c : s.curves) {
        for (const auto* init : {"meta", "ekya"}) {
          const auto& curve = std::string_view(init) == "meta" ? c.meta : c.ekya;
          for (std::size_t e = 0; e < curve.size(); ++e) {
            f << c.seed << ',' << c.round << ',' << c.scene_id << ',' << c.selected << ',' << init << ',' << e << ','
              << format_number(curve[e]) << '\n';
          }
        }
      }
    }
  }
  if (!report.segments.empty()) {
    auto f = open(dir / "segments.csv");
    header(f, "segments.csv");
    for (const auto& r : report.segments) {
      const auto& s = r.metrics;
      f << to_string(r.policy) << ',' << r.seed << ',' << s.segment << ',' << s.tag << ',' << s.scene_id << ','
        << format_number(s.start) << ',' << format_number(s.end) << ',' << s.items << ','
        << format_number(s.accuracy) << ',' << format_number(s.training_seconds) << '\n';
    }
  }
  if (!report.ablation.empty()) {
    auto f = open(dir / "ablation.csv");
    header(f, "ablation.csv");
    for (const auto& r : report.ablation) {
      f << to_string(r.policy) << ',' << r.seed << ',' << r.variant << ','
        << (r.selection == SelectionMode::ScpsEntropy ? "scps_entropy" : "uniform") << ','
        << format_number(r.budget_multiplier) << ',' << format_number(r.accuracy) << ',' << r.labels << ','
        << r.retrains << ',' << format_number(r.mean_training_units) << '\n';
    }
  }
  if (!report.squeeze.empty()) {
    auto f = open(dir / "squeeze.csv");
    header(f, "squeeze.csv");
    for (const auto& r : report.squeeze) {
      f << to_string(r.policy) << ',' << r.seed << ',' << format_number(r.factor) << ',' << format_number(r.capacity)
        << ',' << format_number(r.accuracy) << ',' << format_number(r.training_fraction) << ',' << flag(r.overloaded)
        << '\n';
    }
  }
  if (!report.convergence.empty()) {
    auto f = open(dir / "convergence.csv");
    header(f, "convergence.csv");
    auto g = open(dir / "scene_distance.csv");
    header(g, "scene_distance.csv");
    for (const auto& s : report.convergence) {
      const double ratio = s.first_mean > 0.0 ? s.last_mean / s.first_mean : std::nan("");
      f << s.seed << ',' << format_number(s.first_mean) << ',' << format_number(s.last_mean) << ','
        << format_number(ratio) << ',';
      if (s.fresh_round) f << *s.fresh_round;
      f << ',';
      if (s.reused_round) f << *s.reused_round;
      f << '\n';
      for (std::size_t i = 0; i < s.scene_distance.size(); ++i) {
        g << s.seed << ',' << i << ',' << format_number(s.scene_distance[i]) << '\n';
      }
    }
  }
}

void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto probe = dir / ".edgecl-write-test";
  {
    std::ofstream out(probe);
    if (!out) throw std::runtime_error("output directory " + dir.string() + " is not writable");
  }
  std::filesystem::remove(probe, ec);
}

}  // namespace edgecl
