#pragma once

// Dense solves for the small (K x K) correction systems. Partial-pivot LU
// with near-singularity detection: when the smallest pivot magnitude drops
// below 1e-12 * max|a_ij|, the system is re-solved as (A + eps*I) x = b and
// the fallback is flagged for the caller.

#include <Eigen/LU>

#include <algorithm>
#include <stdexcept>

#include "spectrack/types.hpp"

namespace spectrack {

template <typename Scalar>
struct SmallSolve {
  Vector<Scalar> x;
  bool ridge_used = false;
};

template <typename DerivedA, typename DerivedB>
auto solve_linear_small(const Eigen::MatrixBase<DerivedA>& a_expr,
                        const Eigen::MatrixBase<DerivedB>& b_expr, double ridge = 1e-10)
    -> SmallSolve<typename DerivedA::Scalar> {
  using Scalar = typename DerivedA::Scalar;
  const Matrix<Scalar> a = a_expr;
  const Vector<Scalar> b = b_expr;
  if (a.rows() != a.cols()) throw std::invalid_argument("solve_linear_small: matrix must be square");
  if (a.rows() != b.size()) throw std::invalid_argument("solve_linear_small: rhs size mismatch");
  if (!a.allFinite() || !b.allFinite())
    throw std::invalid_argument("solve_linear_small: non-finite entries");
  if (a.rows() == 0) return {Vector<Scalar>(0), false};

  const Scalar amax = a.cwiseAbs().maxCoeff();
  if (amax > Scalar(0)) {
    Eigen::PartialPivLU<Matrix<Scalar>> lu(a);
    const Scalar pivot_min = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (pivot_min >= Scalar(1e-12) * amax) return {lu.solve(b), false};
  }
  const Scalar eps = Scalar(ridge) * std::max<Scalar>(Scalar(1), amax);
  const Matrix<Scalar> reg = a + eps * Matrix<Scalar>::Identity(a.rows(), a.cols());
  return {Eigen::PartialPivLU<Matrix<Scalar>>(reg).solve(b), true};
}

}  // namespace spectrack
