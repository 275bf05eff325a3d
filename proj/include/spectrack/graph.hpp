#pragma once

// Structured graph updates. A step from n_old to n_old + n_new nodes is the
// symmetric block perturbation
//
//   delta = [ K  G ]        K: edits among existing nodes (signed weights)
//           [ G' C ]        G: edges between existing and new nodes
//                           C: edges among new nodes
//
// applied to the zero-padded old matrix. Deletions are negative K entries and
// must cancel existing weight exactly or partially; results may never go
// negative.

#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "spectrack/sparse.hpp"

namespace spectrack {

struct GraphUpdate {
  Index n_old = 0;
  Index n_new = 0;
  SymSparseMatrix k_block;  // n_old x n_old
  SparseCsr g_block;        // n_old x n_new
  SymSparseMatrix c_block;  // n_new x n_new

  bool empty() const { return n_new == 0 && nnz() == 0; }
  bool pure_expansion() const { return k_block.nnz() == 0; }
  Index nnz() const { return k_block.nnz() + 2 * g_block.nonZeros() + c_block.nnz(); }
  double frobenius_norm() const;

  // The full (n_old + n_new) square perturbation.
  SymSparseMatrix to_delta() const;
};

GraphUpdate make_empty_update(Index n_old, Index n_new = 0);

// An evolving graph: initial matrix plus a chained sequence of updates
// (updates[t].n_old must equal the node count after the first t updates).
// node_origin maps stream node ids back to the source ids they were drawn
// from; labels optionally carries one ground-truth cluster id per stream
// node (nodes keep their label from the step they arrive in).
struct DynamicGraphStream {
  SymSparseMatrix initial;
  std::vector<GraphUpdate> updates;
  std::vector<Index> node_origin;
  std::vector<int> labels;

  Index node_count_after(Index t) const {
    Index n = initial.size();
    for (Index s = 0; s < t && s < static_cast<Index>(updates.size()); ++s)
      n += updates[static_cast<std::size_t>(s)].n_new;
    return n;
  }
  Index final_node_count() const { return node_count_after(static_cast<Index>(updates.size())); }
};

// Assembles an update from edit lists. `added_edges` and `removed_edges`
// address existing nodes only; `new_edges` may address new nodes via indices
// >= n_old (old-new pairs land in G, new-new pairs in C). Duplicate pairs
// across all three lists, self-loops, and out-of-range indices are rejected.
GraphUpdate assemble_update(Index n_old,
                            const std::vector<std::tuple<Index, Index, double>>& added_edges,
                            const std::vector<std::pair<Index, Index>>& removed_edges,
                            Index new_node_count,
                            const std::vector<std::tuple<Index, Index, double>>& new_edges);

// A_hat = pad(a, d.n_new) + delta, with validation: a deletion where the
// padded matrix holds no weight (or any resulting negative weight) throws,
// and entries cancelled to exactly zero are pruned from storage.
SymSparseMatrix apply_update(const SymSparseMatrix& a, const GraphUpdate& d);

enum class LaplacianKind { combinatorial, normalized };

// Shifted Laplacian operator whose leading eigenpairs are the trailing
// eigenpairs of the Laplacian:
//   combinatorial: T = alpha*I - (D - A), safe for alpha >= 2*d_max
//   normalized:    T = 2*I - L_n with L_n = I - D^{-1/2} A D^{-1/2}
// Isolated nodes take L_n diagonal 0, i.e. T diagonal 2. For the
// combinatorial kind an alpha below 2*d_max raises a warning (reported via
// `warning` when provided, stderr otherwise); the normalized kind requires
// alpha == 2.
SymSparseMatrix to_shifted_laplacian(const SymSparseMatrix& a, LaplacianKind kind, double alpha,
                                     std::string* warning = nullptr);

}  // namespace spectrack
