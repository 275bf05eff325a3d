#pragma once

// Trackers for the K leading eigenpairs of an evolving symmetric matrix.
// Every step consumes a Perturbation (the new matrix is pad(old) + delta,
// never materialized by the trackers themselves) and produces a new state.
//
// Two families:
//   * perturbation expansions (trip_basic, trip, residual_modes): correct
//     each eigenpair through first-order sensitivities; cheap but confined
//     to span(X) except for the residual term of residual_modes;
//   * projection methods (iasc, grest2, grest3, grest_rsvd): build an
//     orthonormal basis Z around the current eigenvectors and extract
//     Ritz pairs of the updated matrix from it.
// The timers kind wraps an inner tracker and re-initializes from the full
// matrix whenever an accumulated-change proxy crosses a threshold.

#include <cstdint>
#include <functional>
#include <string>

#include "spectrack/graph.hpp"
#include "spectrack/sparse.hpp"
#include "spectrack/types.hpp"

namespace spectrack {

// (Lambda_K, X_K): eigenvalue estimates plus their eigenvector columns.
struct SpectralEmbedding {
  Vector<double> values;
  Matrix<double> vectors;

  Index k() const { return values.size(); }
  Index n() const { return vectors.rows(); }
};

enum class TrackerKind {
  trip_basic,
  trip,
  residual_modes,
  iasc,
  grest2,
  grest3,
  grest_rsvd,
  timers,
};

// CLI-facing names: trip-basic, trip, rm, iasc, grest2, grest3, grest-rsvd,
// timers.
std::string to_string(TrackerKind kind);
TrackerKind tracker_kind_from_string(const std::string& name);

struct TrackerOptions {
  Index k = 8;
  SpectralOrder order = SpectralOrder::abs_desc;
  double mu = 0.0;                 // residual-modes denominator scalar
  bool trip_replace_span = false;  // x = X b instead of x = x + X b
  Index rsvd_l = 100;              // randomized range finder target rank
  Index rsvd_p = 100;              // oversampling
  double theta = 0.01;             // timers restart threshold
  Index min_restart_gap = 5;       // timers minimum steps between restarts
  TrackerKind restart_inner = TrackerKind::iasc;  // tracker timers delegates to
  std::uint64_t seed = 0;
};

struct TrackerState {
  TrackerKind kind = TrackerKind::grest3;
  TrackerOptions opts;
  SpectralEmbedding embedding;
  Index n = 0;
  double accumulated_change = 0.0;  // timers proxy: sum of ||delta||_F / restart_scale
  Index steps_since_restart = 0;
  double restart_scale = 0.0;  // ||Lambda_K||_F at the last (re)initialization
  std::uint64_t steps_taken = 0;
  bool ridge_used = false;  // sticky: some trip solve needed the ridge fallback
};

// Symmetric perturbation with expansion: new matrix = pad(old, n_new) + delta.
struct Perturbation {
  Index n_old = 0;
  Index n_new = 0;
  SymSparseMatrix delta;  // (n_old + n_new) square

  bool empty() const { return n_new == 0 && delta.nnz() == 0; }
};

Perturbation to_perturbation(const GraphUpdate& d);

// Supplies the full current matrix when a tracker must re-initialize.
using MatrixProvider = std::function<SymSparseMatrix()>;

// Exact (Lanczos) leading eigenpairs of a0; counters zeroed.
TrackerState tracker_init(const SymSparseMatrix& a0, TrackerKind kind, const TrackerOptions& opts);

// First-order correction through the tracked pairs only.
TrackerState trip_basic_step(const TrackerState& s, const Perturbation& p);

// Correction coefficients solved from the K x K system
// (diag(lambda_new_j - lambda_i) - X'DX) b_j = X'D x_j per tracked pair.
TrackerState trip_step(const TrackerState& s, const Perturbation& p);

// trip_basic plus the out-of-span residual term (I - XX')Dx_j / (lambda_j - mu).
TrackerState residual_modes_step(const TrackerState& s, const Perturbation& p, double mu);

enum class BasisKind { iasc, grest2, grest3, grest_rsvd };

// Column-orthonormal basis around the padded eigenvectors:
//   iasc:       [[X, 0], [0, I_S]]
//   grest2:     [X | orth of the projected-out block D X]
//   grest3:     grest2 plus the trailing-S columns of delta
//   grest_rsvd: grest3 with the trailing block compressed by the randomized
//               range finder (bypassed when S <= rsvd_l)
Matrix<double> build_projection_basis(const TrackerState& s, const Perturbation& p, BasisKind kind,
                                      std::uint64_t seed);

// Ritz pairs of the updated matrix from span(z): eigendecomposition of
// M = (Z'X) Lambda (X'Z) + Z'(delta)Z, keeping the top K per the ordering.
TrackerState rayleigh_ritz_step(const TrackerState& s, const Perturbation& p,
                                const Matrix<double>& z);

using StepFn = std::function<TrackerState(const TrackerState&, const Perturbation&)>;

// Accumulates ||delta||_F / restart_scale; once the sum reaches theta and at
// least min_restart_gap steps have passed, re-initializes from the provider's
// matrix, otherwise delegates to `inner`.
TrackerState timers_step(const TrackerState& s, const Perturbation& p, const StepFn& inner,
                         const MatrixProvider& full_matrix);

// One step of the state's own method. `full_matrix` is only consulted by the
// timers kind.
TrackerState tracker_step(const TrackerState& s, const Perturbation& p,
                          const MatrixProvider& full_matrix = {});
TrackerState tracker_step(const TrackerState& s, const GraphUpdate& d,
                          const MatrixProvider& full_matrix = {});

}  // namespace spectrack
