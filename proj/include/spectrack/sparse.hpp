#pragma once

// Symmetric sparse matrices in compressed row storage. Both triangles are
// stored explicitly so row-wise products need no transpose pass; invariants
// (structural symmetry, sorted column indices, no explicitly stored zeros)
// are enforced at construction.

#include <Eigen/SparseCore>

#include <tuple>
#include <utility>
#include <vector>

#include "spectrack/types.hpp"

namespace spectrack {

using SparseCsr = Eigen::SparseMatrix<double, Eigen::RowMajor>;

class SymSparseMatrix {
 public:
  SymSparseMatrix() = default;
  explicit SymSparseMatrix(Index n) : mat_(n, n) { mat_.makeCompressed(); }

  // Builds from entries covering both triangles; duplicates are summed and
  // exact zeros pruned. Throws if the result is not symmetric.
  static SymSparseMatrix from_triplets(Index n, const std::vector<Eigen::Triplet<double>>& entries);

  // Builds an undirected weighted graph: each (i, j, w) inserts both (i, j)
  // and (j, i). Self-loops and repeated edges are rejected.
  static SymSparseMatrix from_edges(Index n,
                                    const std::vector<std::tuple<Index, Index, double>>& edges);
  static SymSparseMatrix from_edges(Index n, const std::vector<std::pair<Index, Index>>& edges);

  // Wraps an already-assembled CSR matrix (compresses, prunes zeros, and
  // optionally re-validates symmetry).
  static SymSparseMatrix wrap(SparseCsr m, bool validate = true);

  Index size() const { return mat_.rows(); }
  Index nnz() const { return mat_.nonZeros(); }
  const SparseCsr& csr() const { return mat_; }
  double coeff(Index i, Index j) const { return mat_.coeff(i, j); }
  double frobenius_norm() const { return mat_.norm(); }

  // Raw compressed-row views.
  const SparseCsr::StorageIndex* row_offsets() const { return mat_.outerIndexPtr(); }
  const SparseCsr::StorageIndex* col_indices() const { return mat_.innerIndexPtr(); }
  const double* values() const { return mat_.valuePtr(); }

  bool is_symmetric() const;

 private:
  SparseCsr mat_;
};

// y = A x. Throws on dimension mismatch.
Vector<double> matvec(const SymSparseMatrix& a, const Vector<double>& x);

// Dense block product A * X.
Matrix<double> matmat(const SymSparseMatrix& a, const Matrix<double>& x);

// Zero-pads by s rows and columns (s >= 0).
SymSparseMatrix pad(const SymSparseMatrix& a, Index s);

// Weighted degree vector d_i = sum_j a_ij.
Vector<double> degrees(const SymSparseMatrix& a);

Matrix<double> to_dense(const SymSparseMatrix& a);

}  // namespace spectrack
