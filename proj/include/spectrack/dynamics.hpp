#pragma once

// Experiment stream generators: degree-split expansion of a static graph,
// timestamped edge replay, and a dynamic stochastic block model.

#include <cstdint>
#include <vector>

#include "spectrack/graph.hpp"

namespace spectrack {

struct TimestampedEdge {
  Index u = 0;
  Index v = 0;
  long long t = 0;
};

struct TimestampedEdgeList {
  Index n = 0;
  std::vector<TimestampedEdge> edges;
};

// Seeds with the top-floor(N/2) nodes by degree (ties by ascending id), then
// adds the remaining nodes in t_steps batches of floor((N-N0)/t_steps), with
// the leftover folded into the final batch. Edges appear as soon as both
// endpoints are present.
DynamicGraphStream scenario1_stream(const SymSparseMatrix& g, Index t_steps);

// Replays a timestamped edge list: edges are ordered by timestamp (stable for
// equal stamps), duplicates dropped keeping the first occurrence, and node
// ids compacted by first appearance. The first m0 unique edges form the
// initial graph; the rest arrive in t_steps batches (leftover in the final
// batch).
DynamicGraphStream scenario2_stream(const TimestampedEdgeList& list, Index t_steps, Index m0);

struct SbmConfig {
  Index n = 0;
  int k_clusters = 2;
  double p_in = 0.05;
  double p_out = 0.001;
  Index n0 = 0;         // nodes present at t = 0
  Index t_steps = 0;    // expansion steps
  Index s_per_step = 0; // new nodes per step
  std::uint64_t seed = 0;
};

// One static sample: uniform random cluster labels, then independent edges
// with probability p_in inside a cluster and p_out across. Requires
// 0 <= p_out < p_in <= 1.
SymSparseMatrix sbm_sample_graph(Index n, int k_clusters, double p_in, double p_out,
                                 std::uint64_t seed, std::vector<int>* labels = nullptr);

// Samples the full graph once, then reveals nodes in a seeded random arrival
// order: n0 initially, s_per_step per step. Nodes beyond n0 + t_steps *
// s_per_step never arrive. Ground-truth labels ride along on the stream.
DynamicGraphStream sbm_dynamic_stream(const SbmConfig& cfg);

}  // namespace spectrack
