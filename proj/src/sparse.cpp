#include "spectrack/sparse.hpp"

#include <set>
#include <stdexcept>

namespace spectrack {

namespace {

void prune_zeros(SparseCsr& m) {
  m.prune([](Index, Index, double v) { return v != 0.0; });
  m.makeCompressed();
}

}  // namespace

SymSparseMatrix SymSparseMatrix::from_triplets(Index n,
                                               const std::vector<Eigen::Triplet<double>>& entries) {
  if (n < 0) throw std::invalid_argument("SymSparseMatrix: negative size");
  SparseCsr m(n, n);
  m.setFromTriplets(entries.begin(), entries.end());
  return wrap(std::move(m), true);
}

SymSparseMatrix SymSparseMatrix::from_edges(
    Index n, const std::vector<std::tuple<Index, Index, double>>& edges) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * edges.size());
  std::set<std::pair<Index, Index>> seen;
  for (const auto& [i, j, w] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw std::invalid_argument("SymSparseMatrix: edge endpoint out of range");
    if (i == j) throw std::invalid_argument("SymSparseMatrix: self-loop rejected");
    if (!seen.insert({std::min(i, j), std::max(i, j)}).second)
      throw std::invalid_argument("SymSparseMatrix: duplicate edge rejected");
    t.emplace_back(i, j, w);
    t.emplace_back(j, i, w);
  }
  SparseCsr m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  SymSparseMatrix out;
  out.mat_ = std::move(m);
  prune_zeros(out.mat_);
  return out;
}

SymSparseMatrix SymSparseMatrix::from_edges(Index n,
                                            const std::vector<std::pair<Index, Index>>& edges) {
  std::vector<std::tuple<Index, Index, double>> weighted;
  weighted.reserve(edges.size());
  for (const auto& [i, j] : edges) weighted.emplace_back(i, j, 1.0);
  return from_edges(n, weighted);
}

SymSparseMatrix SymSparseMatrix::wrap(SparseCsr m, bool validate) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SymSparseMatrix: matrix must be square");
  SymSparseMatrix out;
  out.mat_ = std::move(m);
  prune_zeros(out.mat_);
  if (validate && !out.is_symmetric())
    throw std::invalid_argument("SymSparseMatrix: matrix is not symmetric");
  return out;
}

bool SymSparseMatrix::is_symmetric() const {
  SparseCsr t = SparseCsr(mat_.transpose());
  t.makeCompressed();
  if (t.nonZeros() != mat_.nonZeros()) return false;
  const Index n = mat_.rows();
  for (Index r = 0; r <= n; ++r)
    if (mat_.outerIndexPtr()[r] != t.outerIndexPtr()[r]) return false;
  for (Index k = 0; k < mat_.nonZeros(); ++k) {
    if (mat_.innerIndexPtr()[k] != t.innerIndexPtr()[k]) return false;
    if (mat_.valuePtr()[k] != t.valuePtr()[k]) return false;
  }
  return true;
}

Vector<double> matvec(const SymSparseMatrix& a, const Vector<double>& x) {
  if (x.size() != a.size()) throw std::invalid_argument("matvec: dimension mismatch");
  return a.csr() * x;
}

Matrix<double> matmat(const SymSparseMatrix& a, const Matrix<double>& x) {
  if (x.rows() != a.size()) throw std::invalid_argument("matmat: dimension mismatch");
  return a.csr() * x;
}

SymSparseMatrix pad(const SymSparseMatrix& a, Index s) {
  if (s < 0) throw std::invalid_argument("pad: negative padding");
  SparseCsr m = a.csr();
  m.conservativeResize(a.size() + s, a.size() + s);
  m.makeCompressed();
  return SymSparseMatrix::wrap(std::move(m), false);
}

Vector<double> degrees(const SymSparseMatrix& a) {
  return a.csr() * Vector<double>::Ones(a.size());
}

Matrix<double> to_dense(const SymSparseMatrix& a) { return Matrix<double>(a.csr()); }

}  // namespace spectrack
