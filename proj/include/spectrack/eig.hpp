#pragma once

// Dense symmetric eigensolver plus the ordering convention shared by every
// spectral routine in the library.

#include <Eigen/Eigenvalues>

#include <stdexcept>

#include "spectrack/types.hpp"

namespace spectrack {

template <typename Scalar>
struct EigResult {
  Vector<Scalar> values;   // ranked per the requested order
  Matrix<Scalar> vectors;  // columns aligned with `values`
};

template <typename Scalar>
EigResult<Scalar> reorder_eig(const Vector<Scalar>& values, const Matrix<Scalar>& vectors,
                              SpectralOrder order) {
  const std::vector<Index> perm = spectral_sort(values, order);
  EigResult<Scalar> out;
  out.values.resize(values.size());
  out.vectors.resize(vectors.rows(), vectors.cols());
  for (Index i = 0; i < values.size(); ++i) {
    out.values[i] = values[perm[static_cast<std::size_t>(i)]];
    out.vectors.col(i) = vectors.col(perm[static_cast<std::size_t>(i)]);
  }
  return out;
}

// Full eigendecomposition of a dense symmetric matrix. The input is
// symmetrized as (S + Sᵀ)/2 before factorization so callers may pass products
// that are symmetric only up to roundoff.
template <typename Derived>
auto sym_eig_dense(const Eigen::MatrixBase<Derived>& s_expr, SpectralOrder order)
    -> EigResult<typename Derived::Scalar> {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> s = s_expr;
  if (s.rows() != s.cols()) throw std::invalid_argument("sym_eig_dense: matrix must be square");
  if (!s.allFinite()) throw std::invalid_argument("sym_eig_dense: non-finite entries");
  if (s.rows() == 0) return {};
  const Matrix<Scalar> sym = Scalar(0.5) * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(sym);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("sym_eig_dense: factorization did not converge");
  return reorder_eig<Scalar>(solver.eigenvalues(), solver.eigenvectors(), order);
}

}  // namespace spectrack
