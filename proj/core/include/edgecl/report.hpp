#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "edgecl/experiments.hpp"

namespace edgecl {

inline constexpr int kSchemaVersion = 1;

struct CsvSchema {
  std::string file;
  std::vector<std::string> columns;
};

// Column sets of every CSV the harness writes.
const std::vector<CsvSchema>& csv_schemas();
const CsvSchema& csv_schema(std::string_view file);

// JSON description of the output layout (files, columns, version).
std::string schema_json();

// Shortest decimal that round-trips; empty for NaN.
std::string format_number(double v);

// Per-run trace files.
void write_items_csv(std::ostream& out, const RunTrace& trace);
void write_timeline_csv(std::ostream& out, const RunTrace& trace);
void write_sessions_csv(std::ostream& out, const RunTrace& trace);
void write_sampler_csv(std::ostream& out, const RunTrace& trace);
void write_centroids_csv(std::ostream& out, const RunTrace& trace);
std::string run_summary_json(const RunRecord& record, const RunTrace& trace);

// Writes <dir>/runs/<run id>/ with summary.json and the five trace CSVs.
void write_run(const std::filesystem::path& dir, const RunRecord& record, const RunTrace& trace);

// Sink that writes every run under `dir` as it finishes.
RunSink trace_writer(const std::filesystem::path& dir);

// Experiment-level summary.json plus study tables (runs.csv, and whichever of
// rampup.csv, segments.csv, ablation.csv, squeeze.csv, convergence.csv apply).
void write_report(const std::filesystem::path& dir, const ExperimentReport& report);
std::string report_summary_json(const ExperimentReport& report);

// Creates `dir` and checks that a file can be written inside it.
void prepare_output_dir(const std::filesystem::path& dir);

}  // namespace edgecl
