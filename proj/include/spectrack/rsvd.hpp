#pragma once

// Randomized range finder for a rectangular operator B (rows x cols):
//   1. sample Y = B * Omega with Gaussian Omega (cols x (l + p))
//   2. orthonormalize M = orth(Y)
//   3. SVD of the small projection M' B
//   4. rotate: R = M * U_l
// When rank(B) <= l + p the returned basis spans Ran(B) exactly (with
// probability one over the Gaussian draw); columns beyond the numerically
// detected rank are discarded. The adjoint apply is required for step 3,
// which needs B' M.

#include <Eigen/SVD>

#include <functional>
#include <stdexcept>

#include "spectrack/ortho.hpp"
#include "spectrack/rng.hpp"
#include "spectrack/types.hpp"

namespace spectrack {

template <typename Scalar>
struct RectOperator {
  Index rows = 0;
  Index cols = 0;
  // (cols x m) -> (rows x m)
  std::function<Matrix<Scalar>(const Matrix<Scalar>&)> apply;
  // (rows x m) -> (cols x m)
  std::function<Matrix<Scalar>(const Matrix<Scalar>&)> apply_adjoint;
};

template <typename Scalar>
Matrix<Scalar> rsvd_basis(const RectOperator<Scalar>& op, Index target_rank, Index oversample,
                          std::uint64_t seed) {
  if (target_rank < 1) throw std::invalid_argument("rsvd_basis: target rank must be positive");
  if (oversample < 0) throw std::invalid_argument("rsvd_basis: negative oversampling");
  if (op.rows <= 0 || op.cols <= 0 || !op.apply || !op.apply_adjoint)
    throw std::invalid_argument("rsvd_basis: operator not fully specified");

  const Index draw = std::min(op.cols, target_rank + oversample);
  GaussianSampler rng(mix_seed(seed, 0x5bdU));
  const Matrix<Scalar> omega = rng.gaussian_matrix(op.cols, draw).template cast<Scalar>();
  const Matrix<Scalar> y = op.apply(omega);
  if (y.rows() != op.rows || y.cols() != draw)
    throw std::invalid_argument("rsvd_basis: apply returned wrong shape");

  const Matrix<Scalar> m = orthonormalize(y);
  if (m.cols() == 0) return Matrix<Scalar>(op.rows, 0);

  // M' B computed through the adjoint: (B' M)'.
  const Matrix<Scalar> bt_m = op.apply_adjoint(m);
  if (bt_m.rows() != op.cols || bt_m.cols() != m.cols())
    throw std::invalid_argument("rsvd_basis: apply_adjoint returned wrong shape");
  const Matrix<Scalar> mtb = bt_m.transpose();

  Eigen::JacobiSVD<Matrix<Scalar>> svd(mtb, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const Scalar cutoff = sv.size() > 0 ? Scalar(1e-10) * sv(0) : Scalar(0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff && sv(rank) > Scalar(0)) ++rank;
  const Index keep = std::min(target_rank, rank);
  if (keep == 0) return Matrix<Scalar>(op.rows, 0);
  return m * svd.matrixU().leftCols(keep);
}

// Convenience wrapper around a dense matrix.
template <typename Scalar>
RectOperator<Scalar> dense_operator(const Matrix<Scalar>& b) {
  RectOperator<Scalar> op;
  op.rows = b.rows();
  op.cols = b.cols();
  op.apply = [b](const Matrix<Scalar>& x) { return Matrix<Scalar>(b * x); };
  op.apply_adjoint = [b](const Matrix<Scalar>& x) { return Matrix<Scalar>(b.transpose() * x); };
  return op;
}

}  // namespace spectrack
