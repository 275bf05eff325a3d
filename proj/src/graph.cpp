#include "spectrack/graph.hpp"

#include <cmath>
#include <iostream>
#include <set>
#include <stdexcept>

namespace spectrack {

double GraphUpdate::frobenius_norm() const {
  const double k2 = k_block.frobenius_norm() * k_block.frobenius_norm();
  const double g2 = g_block.norm() * g_block.norm();
  const double c2 = c_block.frobenius_norm() * c_block.frobenius_norm();
  return std::sqrt(k2 + 2.0 * g2 + c2);
}

SymSparseMatrix GraphUpdate::to_delta() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(nnz()));
  for (Index r = 0; r < k_block.size(); ++r)
    for (SparseCsr::InnerIterator it(k_block.csr(), r); it; ++it)
      t.emplace_back(it.row(), it.col(), it.value());
  for (Index r = 0; r < g_block.rows(); ++r)
    for (SparseCsr::InnerIterator it(g_block, r); it; ++it) {
      t.emplace_back(it.row(), n_old + it.col(), it.value());
      t.emplace_back(n_old + it.col(), it.row(), it.value());
    }
  for (Index r = 0; r < c_block.size(); ++r)
    for (SparseCsr::InnerIterator it(c_block.csr(), r); it; ++it)
      t.emplace_back(n_old + it.row(), n_old + it.col(), it.value());
  return SymSparseMatrix::from_triplets(n_old + n_new, t);
}

GraphUpdate make_empty_update(Index n_old, Index n_new) {
  if (n_old < 0 || n_new < 0) throw std::invalid_argument("make_empty_update: negative size");
  GraphUpdate d;
  d.n_old = n_old;
  d.n_new = n_new;
  d.k_block = SymSparseMatrix(n_old);
  d.g_block = SparseCsr(n_old, n_new);
  d.c_block = SymSparseMatrix(n_new);
  return d;
}

GraphUpdate assemble_update(Index n_old,
                            const std::vector<std::tuple<Index, Index, double>>& added_edges,
                            const std::vector<std::pair<Index, Index>>& removed_edges,
                            Index new_node_count,
                            const std::vector<std::tuple<Index, Index, double>>& new_edges) {
  if (n_old < 0 || new_node_count < 0)
    throw std::invalid_argument("assemble_update: negative node count");
  const Index n_total = n_old + new_node_count;

  std::set<std::pair<Index, Index>> seen;
  auto note_pair = [&](Index i, Index j) {
    if (i == j) throw std::invalid_argument("assemble_update: self-loop rejected");
    if (!seen.insert({std::min(i, j), std::max(i, j)}).second)
      throw std::invalid_argument("assemble_update: duplicate edge across edit lists");
  };

  std::vector<Eigen::Triplet<double>> kt, gt, ct;
  auto add_old_pair = [&](Index i, Index j, double w) {
    if (i < 0 || j < 0 || i >= n_old || j >= n_old)
      throw std::invalid_argument("assemble_update: edited edge must address existing nodes");
    note_pair(i, j);
    kt.emplace_back(i, j, w);
    kt.emplace_back(j, i, w);
  };

  for (const auto& [i, j, w] : added_edges) {
    if (w == 0.0) throw std::invalid_argument("assemble_update: zero-weight edit");
    add_old_pair(i, j, w);
  }
  for (const auto& [i, j] : removed_edges) add_old_pair(i, j, -1.0);

  for (const auto& [i, j, w] : new_edges) {
    if (i < 0 || j < 0 || i >= n_total || j >= n_total)
      throw std::invalid_argument("assemble_update: new edge endpoint out of range");
    if (w <= 0.0) throw std::invalid_argument("assemble_update: new edges need positive weight");
    note_pair(i, j);
    const Index lo = std::min(i, j), hi = std::max(i, j);
    if (hi < n_old)
      throw std::invalid_argument("assemble_update: new edge addresses only existing nodes");
    if (lo < n_old) {
      gt.emplace_back(lo, hi - n_old, w);
    } else {
      ct.emplace_back(lo - n_old, hi - n_old, w);
      ct.emplace_back(hi - n_old, lo - n_old, w);
    }
  }

  GraphUpdate d = make_empty_update(n_old, new_node_count);
  d.k_block = SymSparseMatrix::from_triplets(n_old, kt);
  SparseCsr g(n_old, new_node_count);
  g.setFromTriplets(gt.begin(), gt.end());
  g.makeCompressed();
  d.g_block = std::move(g);
  d.c_block = SymSparseMatrix::from_triplets(new_node_count, ct);
  return d;
}

SymSparseMatrix apply_update(const SymSparseMatrix& a, const GraphUpdate& d) {
  if (a.size() != d.n_old) throw std::invalid_argument("apply_update: matrix size != d.n_old");
  const SymSparseMatrix padded = pad(a, d.n_new);
  SparseCsr sum = padded.csr() + d.to_delta().csr();
  for (Index r = 0; r < sum.rows(); ++r)
    for (SparseCsr::InnerIterator it(sum, r); it; ++it) {
      if (it.value() < -1e-12) {
        if (padded.coeff(it.row(), it.col()) == 0.0)
          throw std::invalid_argument("apply_update: invalid deletion (no such edge)");
        throw std::invalid_argument("apply_update: update drives an edge weight negative");
      }
    }
  return SymSparseMatrix::wrap(std::move(sum), false);
}

SymSparseMatrix to_shifted_laplacian(const SymSparseMatrix& a, LaplacianKind kind, double alpha,
                                     std::string* warning) {
  const Index n = a.size();
  const Vector<double> deg = degrees(a);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(a.nnz()) + static_cast<std::size_t>(n));

  if (kind == LaplacianKind::combinatorial) {
    const double dmax = n > 0 ? deg.maxCoeff() : 0.0;
    if (alpha < 2.0 * dmax) {
      const std::string msg =
          "to_shifted_laplacian: alpha below 2*d_max; the shifted spectrum may change sign "
          "and magnitude ordering can break";
      if (warning)
        *warning = msg;
      else
        std::cerr << "warning: " << msg << "\n";
    }
    for (Index i = 0; i < n; ++i) t.emplace_back(i, i, alpha - deg[i]);
    for (Index r = 0; r < n; ++r)
      for (SparseCsr::InnerIterator it(a.csr(), r); it; ++it)
        t.emplace_back(it.row(), it.col(), it.value());
  } else {
    if (alpha != 2.0)
      throw std::invalid_argument("to_shifted_laplacian: normalized kind requires alpha == 2");
    Vector<double> scale(n);
    for (Index i = 0; i < n; ++i) scale[i] = deg[i] > 0.0 ? 1.0 / std::sqrt(deg[i]) : 0.0;
    for (Index i = 0; i < n; ++i) t.emplace_back(i, i, deg[i] > 0.0 ? 1.0 : 2.0);
    for (Index r = 0; r < n; ++r)
      for (SparseCsr::InnerIterator it(a.csr(), r); it; ++it)
        // group the scales first so the (i,j) and (j,i) entries round identically
        t.emplace_back(it.row(), it.col(), (scale[it.row()] * scale[it.col()]) * it.value());
  }
  return SymSparseMatrix::from_triplets(n, t);
}

}  // namespace spectrack
