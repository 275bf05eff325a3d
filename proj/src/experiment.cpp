#include "spectrack/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "spectrack/dynamics.hpp"
#include "spectrack/lanczos.hpp"
#include "spectrack/metrics.hpp"
#include "spectrack/rng.hpp"

namespace spectrack {

namespace {

constexpr char kCsvHeader[] = "time,method,metric,index,value";
constexpr std::uint64_t kReferenceSalt = 0x7ef5u;
constexpr std::uint64_t kKmeansSalt = 0x6b31u;

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool has_task(const ExperimentConfig& cfg, TaskKind t) {
  return std::find(cfg.tasks.begin(), cfg.tasks.end(), t) != cfg.tasks.end();
}

TrackerOptions options_for(const ExperimentConfig& cfg, TrackerKind kind, SpectralOrder order,
                           std::uint64_t run_seed, std::size_t method_index) {
  TrackerOptions o;
  o.k = cfg.k;
  o.order = order;
  o.mu = cfg.mu;
  o.rsvd_l = cfg.rsvd_l;
  o.rsvd_p = cfg.rsvd_p;
  o.theta = cfg.theta;
  o.min_restart_gap = cfg.min_restart_gap;
  o.seed = mix_seed(run_seed, 0xd1f3u, method_index);
  (void)kind;
  return o;
}

int cluster_count(const std::vector<int>& labels) {
  int k = 0;
  for (const int l : labels) k = std::max(k, l + 1);
  return k;
}

SbmConfig sbm_from_json(const nlohmann::json& j) {
  SbmConfig c;
  c.n = j.at("n").get<Index>();
  c.k_clusters = j.at("clusters").get<int>();
  c.p_in = j.at("p_in").get<double>();
  c.p_out = j.at("p_out").get<double>();
  c.n0 = j.at("n0").get<Index>();
  c.t_steps = j.at("t_steps").get<Index>();
  c.s_per_step = j.at("s_per_step").get<Index>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

nlohmann::json sbm_to_json(const SbmConfig& c) {
  return {{"n", c.n},           {"clusters", c.k_clusters}, {"p_in", c.p_in},
          {"p_out", c.p_out},   {"n0", c.n0},               {"t_steps", c.t_steps},
          {"s_per_step", c.s_per_step}, {"seed", c.seed}};
}

}  // namespace

std::string to_string(ScenarioKind s) {
  switch (s) {
    case ScenarioKind::static_split: return "static-split";
    case ScenarioKind::timestamped: return "timestamped";
    case ScenarioKind::sbm: return "sbm";
  }
  throw std::invalid_argument("unknown scenario");
}

ScenarioKind scenario_from_string(const std::string& name) {
  if (name == "static-split") return ScenarioKind::static_split;
  if (name == "timestamped") return ScenarioKind::timestamped;
  if (name == "sbm") return ScenarioKind::sbm;
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

std::string to_string(TaskKind t) {
  switch (t) {
    case TaskKind::angles: return "angles";
    case TaskKind::centrality: return "centrality";
    case TaskKind::clustering: return "clustering";
  }
  throw std::invalid_argument("unknown task");
}

TaskKind task_from_string(const std::string& name) {
  if (name == "angles") return TaskKind::angles;
  if (name == "centrality") return TaskKind::centrality;
  if (name == "clustering") return TaskKind::clustering;
  throw std::invalid_argument("unknown task '" + name + "'");
}

void validate(const ExperimentConfig& cfg, bool stream_has_labels) {
  if (cfg.k < 1) throw std::invalid_argument("config: k must be >= 1");
  if (cfg.methods.empty()) throw std::invalid_argument("config: no methods selected");
  if (cfg.tasks.empty()) throw std::invalid_argument("config: at least one task is required");
  if (cfg.repeats < 1) throw std::invalid_argument("config: repeats must be >= 1");
  if (cfg.top_j < 1) throw std::invalid_argument("config: top-j must be >= 1");
  if (has_task(cfg, TaskKind::centrality) && cfg.op != OperatorKind::adjacency)
    throw std::invalid_argument("config: centrality requires the adjacency operator");
  if (has_task(cfg, TaskKind::clustering) && !stream_has_labels)
    throw std::invalid_argument("config: clustering requires a stream with planted labels");
}

std::vector<CsvRow> run_stream_experiment(const DynamicGraphStream& stream,
                                          const ExperimentConfig& cfg, std::uint64_t run_seed) {
  validate(cfg, !stream.labels.empty());
  const bool adjacency = cfg.op == OperatorKind::adjacency;
  const SpectralOrder order = adjacency ? SpectralOrder::abs_desc : SpectralOrder::alg_desc;
  const bool want_angles = has_task(cfg, TaskKind::angles);
  const bool want_centrality = has_task(cfg, TaskKind::centrality);
  const bool want_clustering = has_task(cfg, TaskKind::clustering);

  int k_clusters = 0;
  if (want_clustering) {
    k_clusters = cluster_count(stream.labels);
    if (k_clusters < 1 || k_clusters > cfg.k)
      throw std::invalid_argument("config: cluster count must lie in [1, k]");
  }

  SymSparseMatrix adj = stream.initial;
  std::optional<ShiftedLaplacianSession> session;
  if (!adjacency) session.emplace(adj, laplacian_kind_of(cfg.op));
  const auto current = [&]() -> const SymSparseMatrix& {
    return adjacency ? adj : session->shifted();
  };
  if (cfg.k > current().size())
    throw std::invalid_argument("config: k exceeds the initial node count");

  struct Lane {
    std::string name;
    TrackerState state;
    bool alive = true;
  };
  std::vector<Lane> lanes;
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    const TrackerKind kind = cfg.methods[m];
    Lane lane;
    lane.name = to_string(kind);
    lane.state = tracker_init(current(), kind, options_for(cfg, kind, order, run_seed, m));
    lanes.push_back(std::move(lane));
  }

  std::vector<CsvRow> rows;
  const auto t_steps = static_cast<Index>(stream.updates.size());
  for (Index t = 1; t <= t_steps; ++t) {
    const GraphUpdate& d = stream.updates[static_cast<std::size_t>(t - 1)];
    Perturbation p;
    if (adjacency) {
      p = to_perturbation(d);
      adj = apply_update(adj, d);
    } else {
      p = session->advance(d);
    }
    const SymSparseMatrix& cur = current();
    const Index n_t = cur.size();

    LanczosOptions lo;
    lo.k = cfg.k;
    lo.order = order;
    lo.tol = 1e-10;
    lo.seed = mix_seed(run_seed, kReferenceSalt, static_cast<std::uint64_t>(t));
    const std::function<Vector<double>(const Vector<double>&)> apply =
        [&](const Vector<double>& v) { return matvec(cur, v); };
    const EigResult<double> ref = lanczos_topk<double>(apply, n_t, lo);

    const Index j_eff = std::min(cfg.top_j, n_t);
    std::vector<Index> ref_top;
    if (want_centrality)
      ref_top = subgraph_centrality_topj({ref.values, ref.vectors}, j_eff);

    const std::uint64_t kmeans_seed = mix_seed(run_seed, kKmeansSalt, static_cast<std::uint64_t>(t));
    if (want_clustering) {
      const Partition ref_part =
          kmeans_cluster(ref.vectors.leftCols(k_clusters), k_clusters, kmeans_seed);
      std::vector<int> truth(stream.labels.begin(), stream.labels.begin() + n_t);
      rows.push_back({t, "reference", "ari", 0, adjusted_rand_index(ref_part.labels, truth)});
    }

    for (Lane& lane : lanes) {
      if (!lane.alive) continue;
      try {
        const auto t0 = std::chrono::steady_clock::now();
        lane.state = tracker_step(lane.state, p, [&]() { return cur; });
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        const SpectralEmbedding& est = lane.state.embedding;

        if (want_angles) {
          for (Index i = 0; i < cfg.k; ++i)
            rows.push_back({t, lane.name, "angle", i,
                            principal_angle(ref.vectors.col(i), est.vectors.col(i))});
          rows.push_back({t, lane.name, "subspace_angle", 0,
                          subspace_largest_angle(ref.vectors, est.vectors)});
        }
        if (want_centrality) {
          const auto est_top = subgraph_centrality_topj(est, j_eff);
          rows.push_back(
              {t, lane.name, "centrality_overlap", 0, top_j_overlap(est_top, ref_top, j_eff)});
        }
        if (want_clustering) {
          const Partition part =
              kmeans_cluster(est.vectors.leftCols(k_clusters), k_clusters, kmeans_seed);
          std::vector<int> truth(stream.labels.begin(), stream.labels.begin() + n_t);
          rows.push_back({t, lane.name, "ari", 0, adjusted_rand_index(part.labels, truth)});
        }
        rows.push_back({t, lane.name, "step_seconds", 0, dt.count()});
      } catch (const std::exception&) {
        rows.push_back({t, lane.name, "error", 0, 1.0});
        lane.alive = false;
      }
    }
  }
  return rows;
}

SbmConfig read_sbm_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_sbm_config: cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  return sbm_from_json(j);
}

void write_sbm_config(const SbmConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_sbm_config: cannot open '" + path + "'");
  out << sbm_to_json(cfg).dump(2) << '\n';
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.out.empty()) throw std::invalid_argument("config: missing output path");
  ExperimentReport rep;
  rep.csv_path = cfg.out;
  rep.manifest_path = cfg.out + ".manifest.json";

  DynamicGraphStream base;
  SbmConfig sbm;
  switch (cfg.scenario) {
    case ScenarioKind::static_split: {
      const IngestResult r = ingest_edge_list_file(cfg.input);
      if (r.timestamped)
        throw std::invalid_argument("scenario static-split needs a two-column edge list");
      rep.ingest = r.stats;
      base = scenario1_stream(r.graph, cfg.t_steps);
      break;
    }
    case ScenarioKind::timestamped: {
      const IngestResult r = ingest_edge_list_file(cfg.input);
      if (!r.timestamped)
        throw std::invalid_argument("scenario timestamped needs a three-column edge list");
      rep.ingest = r.stats;
      const auto total = static_cast<Index>(r.timed.edges.size());
      const Index m0 = cfg.m0 > 0 ? cfg.m0 : std::max<Index>(1, total / (cfg.t_steps + 1));
      base = scenario2_stream(r.timed, cfg.t_steps, m0);
      break;
    }
    case ScenarioKind::sbm: {
      sbm = read_sbm_config(cfg.input);
      base = sbm_dynamic_stream(sbm);  // shape check; redrawn per repeat below
      break;
    }
  }
  validate(cfg, !base.labels.empty());

  std::vector<std::uint64_t> run_seeds, stream_seeds;
  for (int r = 0; r < cfg.repeats; ++r) {
    const std::uint64_t run_seed = cfg.seed + static_cast<std::uint64_t>(r);
    run_seeds.push_back(run_seed);
    const DynamicGraphStream* stream = &base;
    DynamicGraphStream redrawn;
    if (cfg.scenario == ScenarioKind::sbm) {
      SbmConfig per_run = sbm;
      per_run.seed = sbm.seed + static_cast<std::uint64_t>(r);
      stream_seeds.push_back(per_run.seed);
      redrawn = sbm_dynamic_stream(per_run);
      stream = &redrawn;
    }
    const std::vector<CsvRow> rows = run_stream_experiment(*stream, cfg, run_seed);
    rep.rows.insert(rep.rows.end(), rows.begin(), rows.end());
  }

  write_csv(rep.rows, rep.csv_path);

  nlohmann::json manifest;
  manifest["config"] = {{"input", cfg.input},
                        {"scenario", to_string(cfg.scenario)},
                        {"operator", to_string(cfg.op)},
                        {"k", cfg.k},
                        {"t_steps", static_cast<Index>(base.updates.size())},
                        {"seed", cfg.seed},
                        {"repeats", cfg.repeats},
                        {"mu", cfg.mu},
                        {"rsvd_l", cfg.rsvd_l},
                        {"rsvd_p", cfg.rsvd_p},
                        {"theta", cfg.theta},
                        {"min_restart_gap", cfg.min_restart_gap},
                        {"top_j", cfg.top_j},
                        {"m0", cfg.m0},
                        {"out", cfg.out}};
  for (const TrackerKind m : cfg.methods) manifest["config"]["methods"].push_back(to_string(m));
  for (const TaskKind t : cfg.tasks) manifest["config"]["tasks"].push_back(to_string(t));
  manifest["run_seeds"] = run_seeds;
  if (cfg.scenario == ScenarioKind::sbm) {
    manifest["stream_seeds"] = stream_seeds;
    manifest["sbm"] = sbm_to_json(sbm);
  } else {
    manifest["ingest"] = {{"nodes", rep.ingest.nodes},
                          {"edges", rep.ingest.edges},
                          {"dropped_self_loops", rep.ingest.dropped_self_loops},
                          {"dropped_duplicates", rep.ingest.dropped_duplicates}};
  }
  std::ofstream mf(rep.manifest_path, std::ios::binary);
  if (!mf) throw std::runtime_error("run_experiment: cannot open '" + rep.manifest_path + "'");
  mf << manifest.dump(2) << '\n';
  return rep;
}

void write_csv(const std::vector<CsvRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "'");
  out << kCsvHeader << '\n';
  for (const CsvRow& r : rows)
    out << r.time << ',' << r.method << ',' << r.metric << ',' << r.index << ','
        << format_value(r.value) << '\n';
  if (!out) throw std::runtime_error("write_csv: write failed for '" + path + "'");
}

std::vector<CsvRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::runtime_error("read_csv: '" + path + "' does not match the expected schema");
  std::vector<CsvRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string time_s, method, metric, index_s, value_s;
    if (!std::getline(ls, time_s, ',') || !std::getline(ls, method, ',') ||
        !std::getline(ls, metric, ',') || !std::getline(ls, index_s, ',') ||
        !std::getline(ls, value_s))
      throw std::runtime_error("read_csv: malformed row at line " + std::to_string(line_no));
    try {
      rows.push_back({static_cast<Index>(std::stoll(time_s)), method, metric,
                      static_cast<Index>(std::stoll(index_s)), std::stod(value_s)});
    } catch (const std::exception&) {
      throw std::runtime_error("read_csv: malformed row at line " + std::to_string(line_no));
    }
  }
  return rows;
}

namespace {

struct Mean {
  double sum = 0.0;
  long count = 0;
  void add(double v) {
    sum += v;
    ++count;
  }
  double value() const { return count > 0 ? sum / static_cast<double>(count) : 0.0; }
};

}  // namespace

void emit_summary(const std::vector<std::string>& inputs, const std::string& out, Index top_m) {
  if (inputs.empty()) throw std::invalid_argument("emit_summary: no inputs");
  if (top_m < 1) throw std::invalid_argument("emit_summary: top_m must be >= 1");
  std::ofstream os(out, std::ios::binary);
  if (!os) throw std::runtime_error("emit_summary: cannot open '" + out + "'");
  os << "source,method,metric,index,value\n";

  for (const std::string& source : inputs) {
    const std::vector<CsvRow> rows = read_csv(source);
    std::vector<std::string> methods;  // first-appearance order, reference included
    const auto method_seen = [&](const std::string& m) {
      if (std::find(methods.begin(), methods.end(), m) == methods.end()) methods.push_back(m);
    };
    std::map<std::pair<std::string, Index>, Mean> angle_by_index, angle_by_time;
    std::map<std::string, Mean> runtime, overlap, ari;
    for (const CsvRow& r : rows) {
      method_seen(r.method);
      if (r.metric == "angle") {
        angle_by_index[{r.method, r.index}].add(r.value);
        if (r.index < top_m) angle_by_time[{r.method, r.time}].add(r.value);
      } else if (r.metric == "step_seconds") {
        runtime[r.method].add(r.value);
      } else if (r.metric == "centrality_overlap") {
        overlap[r.method].add(r.value);
      } else if (r.metric == "ari") {
        ari[r.method].add(r.value);
      }
    }

    const auto emit = [&](const std::string& method, const std::string& metric, Index index,
                          double value) {
      os << source << ',' << method << ',' << metric << ',' << index << ',' << format_value(value)
         << '\n';
    };
    const double ref_ari = ari.count("reference") ? ari.at("reference").value() : 0.0;
    for (const std::string& m : methods) {
      for (const auto& [key, mean] : angle_by_index)
        if (key.first == m) emit(m, "angle_time_mean", key.second, mean.value());
      for (const auto& [key, mean] : angle_by_time)
        if (key.first == m) emit(m, "angle_step_mean", key.second, mean.value());
      if (runtime.count(m)) emit(m, "runtime_mean", 0, runtime.at(m).value());
      if (overlap.count(m)) emit(m, "centrality_overlap_mean", 0, overlap.at(m).value());
      if (ari.count(m)) {
        emit(m, "ari_mean", 0, ari.at(m).value());
        if (m != "reference" && ari.count("reference")) {
          const double est = ari.at(m).value();
          const double ratio = ref_ari == 0.0
                                   ? (est == 0.0 ? 1.0 : std::numeric_limits<double>::infinity())
                                   : est / ref_ari;
          emit(m, "ari_ratio_mean", 0, ratio);
        }
      }
    }
  }
  if (!os) throw std::runtime_error("emit_summary: write failed for '" + out + "'");
}

}  // namespace spectrack
