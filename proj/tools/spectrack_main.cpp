// Command-line front end: ingest | track | summarize | gen-sbm.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "spectrack/dynamics.hpp"
#include "spectrack/edgelist.hpp"
#include "spectrack/experiment.hpp"

namespace {

using namespace spectrack;

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

int cmd_ingest(const std::string& input, const std::string& out) {
  const IngestResult r = ingest_edge_list_file(input);
  std::cout << "format: " << (r.timestamped ? "timestamped" : "static") << '\n'
            << "nodes: " << r.stats.nodes << '\n'
            << "edges: " << r.stats.edges << '\n'
            << "dropped_self_loops: " << r.stats.dropped_self_loops << '\n'
            << "dropped_duplicates: " << r.stats.dropped_duplicates << '\n';
  if (!out.empty()) {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + out + "'");
    if (r.timestamped) {
      for (const TimestampedEdge& e : r.timed.edges)
        os << e.u << ' ' << e.v << ' ' << e.t << '\n';
    } else {
      const SparseCsr& csr = r.graph.csr();
      for (Index i = 0; i < r.graph.size(); ++i)
        for (SparseCsr::InnerIterator it(csr, i); it; ++it)
          if (it.col() > i) os << i << ' ' << it.col() << '\n';
    }
    std::cout << "wrote: " << out << '\n';
  }
  return 0;
}

int cmd_track(const ExperimentConfig& cfg) {
  const ExperimentReport rep = run_experiment(cfg);
  std::cout << "rows: " << rep.rows.size() << '\n'
            << "csv: " << rep.csv_path << '\n'
            << "manifest: " << rep.manifest_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eigenpair tracking for dynamically expanding graphs"};
  app.require_subcommand(1);

  std::string in_path, out_path;
  auto* ingest = app.add_subcommand("ingest", "parse an edge list, report stats, optionally "
                                              "write the compacted list");
  ingest->add_option("--input", in_path, "edge list file")->required();
  ingest->add_option("--out", out_path, "compacted edge list destination");

  ExperimentConfig cfg;
  std::string scenario = "static-split", methods = "grest3", op = "adjacency", tasks = "angles";
  auto* track = app.add_subcommand("track", "run trackers over a dynamic graph stream");
  track->add_option("--input", cfg.input, "edge list, or SBM JSON for --scenario sbm")->required();
  track->add_option("--scenario", scenario, "static-split | timestamped | sbm");
  track->add_option("--methods", methods,
                    "comma list: trip-basic,trip,rm,iasc,timers,grest2,grest3,grest-rsvd");
  track->add_option("--k", cfg.k, "tracked eigenpairs");
  track->add_option("--t-steps", cfg.t_steps, "expansion steps (non-sbm scenarios)");
  track->add_option("--seed", cfg.seed, "base seed; repeat r runs with seed + r");
  track->add_option("--repeats", cfg.repeats, "Monte-Carlo repetitions");
  track->add_option("--mu", cfg.mu, "residual-modes denominator scalar");
  track->add_option("--rsvd-l", cfg.rsvd_l, "randomized range finder target rank");
  track->add_option("--rsvd-p", cfg.rsvd_p, "randomized range finder oversampling");
  track->add_option("--theta", cfg.theta, "timers restart threshold");
  track->add_option("--min-restart-gap", cfg.min_restart_gap, "timers minimum steps between restarts");
  track->add_option("--operator", op, "adjacency | laplacian | normalized-laplacian");
  track->add_option("--tasks", tasks, "comma list: angles,centrality,clustering");
  track->add_option("--top-j", cfg.top_j, "centrality list length");
  track->add_option("--m0", cfg.m0, "timestamped scenario: initial edge count (0 = auto)");
  track->add_option("--out", cfg.out, "CSV destination")->required();

  std::vector<std::string> summary_inputs;
  Index top_m = 32;
  auto* summarize = app.add_subcommand("summarize", "aggregate long-form CSVs into means");
  summarize->add_option("--input", summary_inputs, "long-form CSV files")
      ->required()
      ->delimiter(',');
  summarize->add_option("--top-m", top_m, "leading angles per step mean");
  summarize->add_option("--out", out_path, "summary CSV destination")->required();

  SbmConfig sbm;
  auto* gen = app.add_subcommand("gen-sbm", "write an SBM stream parameter file");
  gen->add_option("--n", sbm.n, "total nodes")->required();
  gen->add_option("--clusters", sbm.k_clusters, "planted clusters");
  gen->add_option("--p-in", sbm.p_in, "within-cluster edge probability");
  gen->add_option("--p-out", sbm.p_out, "across-cluster edge probability");
  gen->add_option("--n0", sbm.n0, "nodes present at t = 0")->required();
  gen->add_option("--t-steps", sbm.t_steps, "expansion steps")->required();
  gen->add_option("--s-per-step", sbm.s_per_step, "new nodes per step")->required();
  gen->add_option("--seed", sbm.seed, "stream seed");
  gen->add_option("--out", out_path, "JSON destination")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) return cmd_ingest(in_path, out_path);
    if (track->parsed()) {
      cfg.scenario = scenario_from_string(scenario);
      cfg.op = operator_kind_from_string(op);
      for (const std::string& m : split_commas(methods))
        cfg.methods.push_back(tracker_kind_from_string(m));
      for (const std::string& t : split_commas(tasks)) cfg.tasks.push_back(task_from_string(t));
      return cmd_track(cfg);
    }
    if (summarize->parsed()) {
      emit_summary(summary_inputs, out_path, top_m);
      std::cout << "wrote: " << out_path << '\n';
      return 0;
    }
    if (gen->parsed()) {
      write_sbm_config(sbm, out_path);
      std::cout << "wrote: " << out_path << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
