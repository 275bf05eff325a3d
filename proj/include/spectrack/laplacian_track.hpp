#pragma once

// Trailing Laplacian eigenpairs through the shift trick: run the leading-pair
// trackers on T = alpha*I - L, whose leading eigenpairs are L's trailing ones,
// then report nu_i = alpha - mu_i with the eigenvectors unchanged.

#include <string>
#include <vector>

#include "spectrack/graph.hpp"
#include "spectrack/trackers.hpp"

namespace spectrack {

enum class OperatorKind { adjacency, laplacian, normalized_laplacian };

std::string to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(const std::string& name);

// Which Laplacian a non-adjacency operator mode refers to; throws for
// adjacency.
LaplacianKind laplacian_kind_of(OperatorKind kind);

// Holds the evolving adjacency matrix together with its shifted operator and
// converts graph updates into perturbations of T. The shift alpha only ever
// increases (to 2*d_max when the maximum degree grows); the re-shift lands in
// the returned perturbation as an explicit diagonal.
class ShiftedLaplacianSession {
 public:
  ShiftedLaplacianSession(SymSparseMatrix a0, LaplacianKind kind);

  // Applies the update to the adjacency matrix and returns the T-space
  // perturbation satisfying pad(T_old) + delta = T_new exactly.
  Perturbation advance(const GraphUpdate& d);

  const SymSparseMatrix& adjacency() const { return a_; }
  const SymSparseMatrix& shifted() const { return t_; }
  double alpha() const { return alpha_; }

  // Maps a tracked embedding of T to Laplacian eigenvalues nu = alpha - mu;
  // algebraic-descending mu gives ascending nu, i.e. trailing pairs first.
  SpectralEmbedding laplacian_view(const SpectralEmbedding& e) const;

 private:
  LaplacianKind kind_;
  double alpha_;
  SymSparseMatrix a_;
  SymSparseMatrix t_;
};

TrackerKind tracker_kind_of(BasisKind basis);

// Runs a projection tracker over the whole stream in shifted-operator space
// and returns one Laplacian-view embedding per time step (t = 0 included).
// opts.k and opts.order are overridden by `k` and the algebraic mode.
std::vector<SpectralEmbedding> laplacian_tracking_adapter(const DynamicGraphStream& stream,
                                                          LaplacianKind kind, Index k,
                                                          BasisKind inner,
                                                          TrackerOptions opts = {});

}  // namespace spectrack
