#pragma once

// Batch experiment driver: replays a dynamic-graph stream, steps every
// configured tracker against a high-accuracy Lanczos reference, and emits
// long-form CSV rows plus a JSON manifest. One value per row keeps the output
// diffable and directly consumable by plotting tools.

#include <cstdint>
#include <string>
#include <vector>

#include "spectrack/dynamics.hpp"
#include "spectrack/edgelist.hpp"
#include "spectrack/graph.hpp"
#include "spectrack/laplacian_track.hpp"
#include "spectrack/trackers.hpp"
#include "spectrack/types.hpp"

namespace spectrack {

enum class ScenarioKind { static_split, timestamped, sbm };
enum class TaskKind { angles, centrality, clustering };

std::string to_string(ScenarioKind s);
ScenarioKind scenario_from_string(const std::string& name);
std::string to_string(TaskKind t);
TaskKind task_from_string(const std::string& name);

struct ExperimentConfig {
  std::string input;  // edge-list path, or SBM parameter JSON for the sbm scenario
  ScenarioKind scenario = ScenarioKind::static_split;
  std::vector<TrackerKind> methods;
  Index k = 64;
  Index t_steps = 10;
  std::uint64_t seed = 0;
  int repeats = 10;
  double mu = 0.0;
  Index rsvd_l = 100;
  Index rsvd_p = 100;
  double theta = 0.01;
  Index min_restart_gap = 5;
  OperatorKind op = OperatorKind::adjacency;
  std::vector<TaskKind> tasks;
  Index top_j = 100;
  Index m0 = 0;  // timestamped scenario: initial edge count, 0 = |E|/(T+1)
  std::string out;
};

// Long-form record; `time` counts update steps starting at 1.
struct CsvRow {
  Index time = 0;
  std::string method;
  std::string metric;  // angle | subspace_angle | centrality_overlap | ari | step_seconds | error
  Index index = 0;
  double value = 0.0;
};

// Throws on inconsistent settings (empty methods/tasks, centrality off the
// adjacency operator, clustering without planted labels, ...).
void validate(const ExperimentConfig& cfg, bool stream_has_labels);

// One Monte-Carlo run over a prepared stream. Per-method failures become a
// single metric=error row and silence that method for the rest of the run.
std::vector<CsvRow> run_stream_experiment(const DynamicGraphStream& stream,
                                          const ExperimentConfig& cfg, std::uint64_t run_seed);

// SBM parameter JSON (keys: n, clusters, p_in, p_out, n0, t_steps,
// s_per_step, seed) consumed by the sbm scenario and produced by gen-sbm.
SbmConfig read_sbm_config(const std::string& path);
void write_sbm_config(const SbmConfig& cfg, const std::string& path);

struct ExperimentReport {
  std::vector<CsvRow> rows;
  IngestStats ingest;          // meaningful when the input was an edge list
  std::string csv_path;
  std::string manifest_path;   // csv_path + ".manifest.json"
};

// Builds the stream for cfg.scenario, repeats run_stream_experiment with
// seed offsets (the sbm scenario also redraws the stream per repeat), writes
// the CSV and manifest, and returns everything written.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

void write_csv(const std::vector<CsvRow>& rows, const std::string& path);
std::vector<CsvRow> read_csv(const std::string& path);

// Aggregates long-form CSVs into figure-ready means: per-eigenvector time
// means, per-step means over the leading top_m angles, mean runtimes,
// centrality-overlap means, and ARI ratios against the reference rows.
// Output schema: source,method,metric,index,value.
void emit_summary(const std::vector<std::string>& inputs, const std::string& out, Index top_m = 32);

}  // namespace spectrack
