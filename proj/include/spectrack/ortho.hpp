#pragma once

// Gram-Schmidt with a second full pass ("twice is enough") and rank detection
// by per-column norm drop: a column whose norm after projection falls below
// drop_tol times its original norm is discarded.

#include <stdexcept>

#include "spectrack/types.hpp"

namespace spectrack {

template <typename DerivedM, typename DerivedB>
auto orthonormalize(const Eigen::MatrixBase<DerivedM>& m_expr,
                    const Eigen::MatrixBase<DerivedB>& against_expr, double drop_tol = 1e-10) {
  using Scalar = typename DerivedM::Scalar;
  const Matrix<Scalar> m = m_expr;
  const Matrix<Scalar> against = against_expr;
  if (against.cols() > 0 && against.rows() != m.rows())
    throw std::invalid_argument("orthonormalize: row count mismatch with `against`");
  if (!m.allFinite() || !against.allFinite())
    throw std::invalid_argument("orthonormalize: non-finite entries");

  Matrix<Scalar> q(m.rows(), m.cols());
  Index r = 0;
  for (Index c = 0; c < m.cols(); ++c) {
    Vector<Scalar> v = m.col(c);
    const Scalar orig = v.norm();
    if (orig == Scalar(0)) continue;
    for (int pass = 0; pass < 2; ++pass) {
      if (against.cols() > 0) v.noalias() -= against * (against.transpose() * v);
      if (r > 0) v.noalias() -= q.leftCols(r) * (q.leftCols(r).transpose() * v);
    }
    const Scalar nrm = v.norm();
    if (nrm < Scalar(drop_tol) * orig) continue;
    q.col(r++) = v / nrm;
  }
  return q.leftCols(r).eval();
}

template <typename Derived>
auto orthonormalize(const Eigen::MatrixBase<Derived>& m, double drop_tol = 1e-10) {
  using Scalar = typename Derived::Scalar;
  return orthonormalize(m, Matrix<Scalar>(m.rows(), 0), drop_tol);
}

}  // namespace spectrack
