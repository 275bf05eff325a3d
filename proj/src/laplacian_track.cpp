#include "spectrack/laplacian_track.hpp"

#include <stdexcept>
#include <utility>

namespace spectrack {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::adjacency: return "adjacency";
    case OperatorKind::laplacian: return "laplacian";
    case OperatorKind::normalized_laplacian: return "normalized-laplacian";
  }
  throw std::logic_error("unknown operator kind");
}

OperatorKind operator_kind_from_string(const std::string& name) {
  if (name == "adjacency") return OperatorKind::adjacency;
  if (name == "laplacian") return OperatorKind::laplacian;
  if (name == "normalized-laplacian") return OperatorKind::normalized_laplacian;
  throw std::invalid_argument("unknown operator kind: " + name);
}

LaplacianKind laplacian_kind_of(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::laplacian: return LaplacianKind::combinatorial;
    case OperatorKind::normalized_laplacian: return LaplacianKind::normalized;
    case OperatorKind::adjacency: break;
  }
  throw std::invalid_argument("adjacency mode has no Laplacian kind");
}

namespace {

double shift_for(const SymSparseMatrix& a, LaplacianKind kind, double current) {
  if (kind == LaplacianKind::normalized) return 2.0;
  const double d_max = a.size() > 0 ? degrees(a).maxCoeff() : 0.0;
  return std::max(current, 2.0 * d_max);
}

}  // namespace

ShiftedLaplacianSession::ShiftedLaplacianSession(SymSparseMatrix a0, LaplacianKind kind)
    : kind_(kind), alpha_(shift_for(a0, kind, 0.0)), a_(std::move(a0)) {
  t_ = to_shifted_laplacian(a_, kind_, alpha_);
}

Perturbation ShiftedLaplacianSession::advance(const GraphUpdate& d) {
  if (d.n_old != a_.size())
    throw std::invalid_argument("update does not match the session's node count");
  SymSparseMatrix a_next = apply_update(a_, d);
  const double alpha_next = shift_for(a_next, kind_, alpha_);
  SymSparseMatrix t_next = to_shifted_laplacian(a_next, kind_, alpha_next);

  // Sparse differencing: untouched entries are recomputed from unchanged
  // inputs, cancel bitwise, and get pruned, so the delta stays local.
  SparseCsr diff = t_next.csr() - pad(t_, d.n_new).csr();
  Perturbation p{a_.size(), d.n_new, SymSparseMatrix::wrap(std::move(diff), false)};

  a_ = std::move(a_next);
  t_ = std::move(t_next);
  alpha_ = alpha_next;
  return p;
}

SpectralEmbedding ShiftedLaplacianSession::laplacian_view(const SpectralEmbedding& e) const {
  SpectralEmbedding out;
  out.values = Vector<double>::Constant(e.values.size(), alpha_) - e.values;
  out.vectors = e.vectors;
  return out;
}

TrackerKind tracker_kind_of(BasisKind basis) {
  switch (basis) {
    case BasisKind::iasc: return TrackerKind::iasc;
    case BasisKind::grest2: return TrackerKind::grest2;
    case BasisKind::grest3: return TrackerKind::grest3;
    case BasisKind::grest_rsvd: return TrackerKind::grest_rsvd;
  }
  throw std::logic_error("unknown basis kind");
}

std::vector<SpectralEmbedding> laplacian_tracking_adapter(const DynamicGraphStream& stream,
                                                          LaplacianKind kind, Index k,
                                                          BasisKind inner, TrackerOptions opts) {
  opts.k = k;
  opts.order = SpectralOrder::alg_desc;
  ShiftedLaplacianSession session(stream.initial, kind);
  TrackerState state = tracker_init(session.shifted(), tracker_kind_of(inner), opts);

  std::vector<SpectralEmbedding> out;
  out.reserve(stream.updates.size() + 1);
  out.push_back(session.laplacian_view(state.embedding));
  for (const GraphUpdate& d : stream.updates) {
    const Perturbation p = session.advance(d);
    state = tracker_step(state, p);
    out.push_back(session.laplacian_view(state.embedding));
  }
  return out;
}

}  // namespace spectrack
