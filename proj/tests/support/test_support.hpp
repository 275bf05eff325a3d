#pragma once

// Shared helpers for the unit and acceptance suites. Reference quantities are
// computed along routes that are independent of the code paths under test
// (plain dense algebra, brute-force counting), so a test failure points at
// the library rather than at its own expectations.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "spectrack/rng.hpp"
#include "spectrack/types.hpp"

namespace spectrack::testing {

// Angle between two vectors, sign- and scale-invariant. Written out directly
// so metric code is never used to validate itself.
inline double col_angle(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double d = std::abs(x.dot(y)) / (x.norm() * y.norm());
  return std::acos(std::min(1.0, std::max(0.0, d)));
}

inline double max_pair_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.cols(); ++i)
    worst = std::max(worst, col_angle(a.col(i), b.col(i)));
  return worst;
}

inline double orthonormality_error(const Eigen::MatrixXd& q) {
  if (q.cols() == 0) return 0.0;
  return (q.transpose() * q - Eigen::MatrixXd::Identity(q.cols(), q.cols()))
      .cwiseAbs()
      .maxCoeff();
}

inline Eigen::MatrixXd random_symmetric(Index n, std::uint64_t seed) {
  GaussianSampler rng(seed);
  Eigen::MatrixXd m = rng.gaussian_matrix(n, n);
  return 0.5 * (m + m.transpose());
}

// Symmetric matrix with a prescribed, well-separated spectrum: Q diag(d) Q^T
// with Q drawn Haar-like from a QR factorization.
inline Eigen::MatrixXd matrix_with_spectrum(const Eigen::VectorXd& d, std::uint64_t seed) {
  GaussianSampler rng(seed);
  const Eigen::MatrixXd g = rng.gaussian_matrix(d.size(), d.size());
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  return q * d.asDiagonal() * q.transpose();
}

// Undirected Erdos-Renyi edge list on n nodes (no self-loops, no duplicates).
inline std::vector<std::pair<Index, Index>> random_edges(Index n, double p, std::uint64_t seed) {
  GaussianSampler rng(seed);
  std::vector<std::pair<Index, Index>> edges;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (rng.uniform() < p) edges.emplace_back(i, j);
  return edges;
}

}  // namespace spectrack::testing
