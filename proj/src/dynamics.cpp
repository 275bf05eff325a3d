#include "spectrack/dynamics.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "spectrack/rng.hpp"

namespace spectrack {

namespace {

std::vector<Index> leftover_folded_batches(Index total, Index t_steps) {
  const Index base = total / t_steps;
  std::vector<Index> batches(static_cast<std::size_t>(t_steps), base);
  batches.back() += total - base * t_steps;
  return batches;
}

// Induced-subgraph expansion of a fully sampled graph: the first n0 nodes of
// `order` start, each batch reveals the next nodes, and an edge materializes
// in the step its later endpoint arrives.
DynamicGraphStream expansion_stream(const SymSparseMatrix& g, const std::vector<Index>& order,
                                    Index n0, const std::vector<Index>& batches) {
  Index used = n0;
  for (const Index b : batches) used += b;
  std::vector<Index> pos(static_cast<std::size_t>(g.size()), -1);
  for (Index i = 0; i < used; ++i) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;

  const SparseCsr& m = g.csr();
  auto emit_edges_of = [&](Index first_pos, Index last_pos) {
    // All edges whose later endpoint lies in [first_pos, last_pos].
    std::vector<std::tuple<Index, Index, double>> out;
    for (Index p = first_pos; p <= last_pos; ++p) {
      const Index orig = order[static_cast<std::size_t>(p)];
      for (SparseCsr::InnerIterator it(m, orig); it; ++it) {
        const Index q = pos[static_cast<std::size_t>(it.col())];
        if (q >= 0 && q < p) out.emplace_back(q, p, it.value());
      }
    }
    return out;
  };

  DynamicGraphStream stream;
  if (n0 > 0) stream.initial = SymSparseMatrix::from_edges(n0, emit_edges_of(0, n0 - 1));
  Index current = n0;
  for (const Index b : batches) {
    std::vector<std::tuple<Index, Index, double>> grown;
    if (b > 0) grown = emit_edges_of(current, current + b - 1);
    GraphUpdate up = make_empty_update(current, b);
    if (!grown.empty()) up = assemble_update(current, {}, {}, b, grown);
    stream.updates.push_back(std::move(up));
    current += b;
  }
  stream.node_origin.assign(order.begin(), order.begin() + used);
  return stream;
}

}  // namespace

DynamicGraphStream scenario1_stream(const SymSparseMatrix& g, Index t_steps) {
  if (t_steps < 1) throw std::invalid_argument("t_steps must be positive");
  const Index n = g.size();
  const Index n0 = n / 2;
  if (n0 < 1) throw std::invalid_argument("graph too small to split");
  const Index remaining = n - n0;
  if (t_steps > remaining)
    throw std::invalid_argument("more steps than nodes left to add");

  const Vector<double> deg = degrees(g);
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return deg(a) > deg(b); });

  return expansion_stream(g, order, n0, leftover_folded_batches(remaining, t_steps));
}

DynamicGraphStream scenario2_stream(const TimestampedEdgeList& list, Index t_steps, Index m0) {
  if (t_steps < 1) throw std::invalid_argument("t_steps must be positive");

  std::vector<std::size_t> idx(list.edges.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return list.edges[a].t < list.edges[b].t;
  });

  std::set<std::pair<Index, Index>> seen;
  std::vector<std::pair<Index, Index>> uniq;  // stream-id endpoints, in order
  std::vector<Index> compact(static_cast<std::size_t>(list.n), -1);
  std::vector<Index> origin;
  std::vector<Index> nodes_after_edge;  // node count once edge i has landed
  for (const std::size_t i : idx) {
    const TimestampedEdge& e = list.edges[i];
    if (e.u == e.v) continue;
    if (e.u < 0 || e.v < 0 || e.u >= list.n || e.v >= list.n)
      throw std::invalid_argument("edge endpoint out of range");
    const auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second) continue;
    for (const Index endpoint : {e.u, e.v})
      if (compact[static_cast<std::size_t>(endpoint)] < 0) {
        compact[static_cast<std::size_t>(endpoint)] = static_cast<Index>(origin.size());
        origin.push_back(endpoint);
      }
    uniq.emplace_back(compact[static_cast<std::size_t>(e.u)],
                      compact[static_cast<std::size_t>(e.v)]);
    nodes_after_edge.push_back(static_cast<Index>(origin.size()));
  }

  const Index total = static_cast<Index>(uniq.size());
  if (m0 < 1 || m0 > total)
    throw std::invalid_argument("m0 must be within the unique edge count");

  DynamicGraphStream stream;
  const Index n0 = nodes_after_edge[static_cast<std::size_t>(m0 - 1)];
  stream.initial = SymSparseMatrix::from_edges(
      n0, std::vector<std::pair<Index, Index>>(uniq.begin(), uniq.begin() + m0));

  Index consumed = m0;
  Index current = n0;
  for (const Index b : leftover_folded_batches(total - m0, t_steps)) {
    const Index upto = consumed + b;
    const Index next_n = b > 0 ? nodes_after_edge[static_cast<std::size_t>(upto - 1)] : current;
    std::vector<std::tuple<Index, Index, double>> added, grown;
    for (Index e = consumed; e < upto; ++e) {
      const auto& [u, v] = uniq[static_cast<std::size_t>(e)];
      if (u < current && v < current)
        added.emplace_back(std::min(u, v), std::max(u, v), 1.0);
      else
        grown.emplace_back(u, v, 1.0);
    }
    GraphUpdate up = make_empty_update(current, next_n - current);
    if (!added.empty() || !grown.empty())
      up = assemble_update(current, added, {}, next_n - current, grown);
    stream.updates.push_back(std::move(up));
    current = next_n;
    consumed = upto;
  }
  stream.node_origin = std::move(origin);
  return stream;
}

SymSparseMatrix sbm_sample_graph(Index n, int k_clusters, double p_in, double p_out,
                                 std::uint64_t seed, std::vector<int>* labels) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (k_clusters < 1) throw std::invalid_argument("k_clusters must be positive");
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0))
    throw std::invalid_argument("need 0 <= p_out < p_in <= 1");

  GaussianSampler rng(mix_seed(seed, 0x5b31u));
  std::vector<int> planted(static_cast<std::size_t>(n));
  for (auto& l : planted) l = static_cast<int>(rng.uniform_index(static_cast<Index>(k_clusters)));

  std::vector<std::pair<Index, Index>> edges;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double p =
          planted[static_cast<std::size_t>(i)] == planted[static_cast<std::size_t>(j)] ? p_in
                                                                                       : p_out;
      if (rng.uniform() < p) edges.emplace_back(i, j);
    }
  if (labels) *labels = std::move(planted);
  return SymSparseMatrix::from_edges(n, edges);
}

DynamicGraphStream sbm_dynamic_stream(const SbmConfig& cfg) {
  if (cfg.n0 < 1) throw std::invalid_argument("n0 must be positive");
  if (cfg.t_steps < 1) throw std::invalid_argument("t_steps must be positive");
  if (cfg.s_per_step < 0) throw std::invalid_argument("s_per_step must be nonnegative");
  if (cfg.n0 + cfg.t_steps * cfg.s_per_step > cfg.n)
    throw std::invalid_argument("stream needs more nodes than the model has");

  std::vector<int> labels;
  const SymSparseMatrix g =
      sbm_sample_graph(cfg.n, cfg.k_clusters, cfg.p_in, cfg.p_out, cfg.seed, &labels);

  GaussianSampler rng(mix_seed(cfg.seed, 0x0a77u));
  std::vector<Index> order(static_cast<std::size_t>(cfg.n));
  std::iota(order.begin(), order.end(), Index{0});
  for (Index i = cfg.n - 1; i > 0; --i) {
    const Index j = rng.uniform_index(i + 1);
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }

  DynamicGraphStream stream = expansion_stream(
      g, order, cfg.n0,
      std::vector<Index>(static_cast<std::size_t>(cfg.t_steps), cfg.s_per_step));
  stream.labels.reserve(stream.node_origin.size());
  for (const Index orig : stream.node_origin)
    stream.labels.push_back(labels[static_cast<std::size_t>(orig)]);
  return stream;
}

}  // namespace spectrack
