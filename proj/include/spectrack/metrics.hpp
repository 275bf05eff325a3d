#pragma once

// Evaluation metrics: principal angles, spectral matrix-function application
// (subgraph centrality), top-J overlap, k-means clustering, and the adjusted
// Rand index.

#include <cstdint>
#include <vector>

#include "spectrack/trackers.hpp"
#include "spectrack/types.hpp"

namespace spectrack {

// arccos(clamp(|x'y|, 0, 1)) after renormalizing both inputs; sign-invariant,
// in [0, pi/2]. Zero vectors are rejected.
double principal_angle(const Vector<double>& x, const Vector<double>& y);

struct MatrixFunction {
  enum class Kind { exponential, polynomial };
  Kind kind = Kind::exponential;
  std::vector<double> coefficients;  // ascending powers; polynomial only

  static MatrixFunction exponential() { return {}; }
  static MatrixFunction polynomial(std::vector<double> coefficients) {
    return {Kind::polynomial, std::move(coefficients)};
  }
};

// h(A) v through an embedding: X h(Lambda) X'v. The true result is
// y * exp(log_scale); the scale is factored out (as the largest eigenvalue)
// only when the plain exponential would overflow, else log_scale = 0.
struct ScaledVector {
  Vector<double> y;
  double log_scale = 0.0;
};
ScaledVector matrix_function_apply(const SpectralEmbedding& e, const MatrixFunction& h,
                                   const Vector<double>& v);

// Top-j node ids by the entries of exp(A) * ones estimated through the
// embedding, descending, ties by ascending id. The overflow scale factor is
// ranking-neutral.
std::vector<Index> subgraph_centrality_topj(const SpectralEmbedding& e, Index j);

// |est ∩ ref| / j; both lists must have length j.
double top_j_overlap(const std::vector<Index>& est, const std::vector<Index>& ref, Index j);

struct Partition {
  std::vector<int> labels;  // values in [0, K)
};

// Best-inertia labeling over n_init restarts of k-means++ initialization plus
// Lloyd iterations (max 300, inertia tolerance 1e-6). Deterministic given
// seed; ties go to the lowest restart index. Empty clusters are dropped and
// labels relabeled compactly.
Partition kmeans_cluster(const Matrix<double>& points, int k, std::uint64_t seed,
                         int n_init = 10);

// Permutation-model adjusted Rand index from the contingency table; symmetric
// and label-permutation invariant. Two trivial (single-cluster or empty)
// partitions compare as 1.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

struct AngleSummary {
  Vector<double> per_vector_time_mean;  // K entries: mean over steps
  Vector<double> per_time_vector_mean;  // T entries: mean over leading top_m
};

// Index-to-index angles between aligned embedding sequences, reduced both
// ways. Requires equal lengths and matching shapes per step; top_m <= K.
AngleSummary angle_summaries(const std::vector<SpectralEmbedding>& reference,
                             const std::vector<SpectralEmbedding>& estimate, Index top_m);

// Largest principal angle between the column spans (diagnostic; inputs are
// orthonormalized internally).
double subspace_largest_angle(const Matrix<double>& x, const Matrix<double>& y);

}  // namespace spectrack
