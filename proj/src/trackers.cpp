#include "spectrack/trackers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "spectrack/eig.hpp"
#include "spectrack/lanczos.hpp"
#include "spectrack/ortho.hpp"
#include "spectrack/rng.hpp"
#include "spectrack/rsvd.hpp"
#include "spectrack/solve.hpp"

namespace spectrack {

namespace {

// Eigenvectors zero-padded to the expanded dimension.
Matrix<double> padded_vectors(const SpectralEmbedding& e, Index s) {
  Matrix<double> xb = Matrix<double>::Zero(e.n() + s, e.k());
  xb.topRows(e.n()) = e.vectors;
  return xb;
}

// Denominators smaller than this are treated as degenerate and their terms
// dropped instead of amplified.
double gap_clamp(const Vector<double>& values) {
  const double lead = values.size() > 0 ? std::abs(values(0)) : 0.0;
  return 1e-12 * std::max(1.0, lead);
}

void check_step(const char* who, const TrackerState& s, const Perturbation& p) {
  if (p.n_old != s.n)
    throw std::invalid_argument(std::string(who) + ": perturbation dimension mismatch");
  if (p.n_new < 0) throw std::invalid_argument(std::string(who) + ": negative expansion");
  if (p.delta.size() != p.n_old + p.n_new)
    throw std::invalid_argument(std::string(who) + ": delta size != n_old + n_new");
}

SpectralEmbedding renormalize_and_sort(Vector<double> values, Matrix<double> vectors,
                                       SpectralOrder order) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    const double nrm = vectors.col(j).norm();
    if (nrm > 0.0) vectors.col(j) /= nrm;
  }
  const EigResult<double> sorted = reorder_eig<double>(values, vectors, order);
  return {sorted.values, sorted.vectors};
}

// Correction coefficients b_ij = (x_i' D x_j) / (lambda_j - lambda_i), with
// degenerate gaps dropped.
Matrix<double> first_order_coefficients(const Matrix<double>& c, const Vector<double>& lam) {
  const double eps = gap_clamp(lam);
  const Index k = lam.size();
  Matrix<double> b = Matrix<double>::Zero(k, k);
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i < k; ++i) {
      if (i == j) continue;
      const double gap = lam(j) - lam(i);
      if (std::abs(gap) < eps) continue;
      b(i, j) = c(i, j) / gap;
    }
  return b;
}

SpectralEmbedding solve_leading(const SymSparseMatrix& a, const TrackerOptions& opts) {
  LanczosOptions lo;
  lo.k = opts.k;
  lo.order = opts.order;
  lo.seed = opts.seed;
  const auto r = lanczos_topk<double>(
      [&a](const Vector<double>& x) { return matvec(a, x); }, a.size(), lo);
  return {r.values, r.vectors};
}

BasisKind basis_kind_of(TrackerKind kind) {
  switch (kind) {
    case TrackerKind::iasc:
      return BasisKind::iasc;
    case TrackerKind::grest2:
      return BasisKind::grest2;
    case TrackerKind::grest3:
      return BasisKind::grest3;
    case TrackerKind::grest_rsvd:
      return BasisKind::grest_rsvd;
    default:
      throw std::invalid_argument("basis_kind_of: not a projection tracker");
  }
}

}  // namespace

std::string to_string(TrackerKind kind) {
  switch (kind) {
    case TrackerKind::trip_basic:
      return "trip-basic";
    case TrackerKind::trip:
      return "trip";
    case TrackerKind::residual_modes:
      return "rm";
    case TrackerKind::iasc:
      return "iasc";
    case TrackerKind::grest2:
      return "grest2";
    case TrackerKind::grest3:
      return "grest3";
    case TrackerKind::grest_rsvd:
      return "grest-rsvd";
    case TrackerKind::timers:
      return "timers";
  }
  throw std::invalid_argument("to_string: unknown tracker kind");
}

TrackerKind tracker_kind_from_string(const std::string& name) {
  if (name == "trip-basic") return TrackerKind::trip_basic;
  if (name == "trip") return TrackerKind::trip;
  if (name == "rm") return TrackerKind::residual_modes;
  if (name == "iasc") return TrackerKind::iasc;
  if (name == "grest2") return TrackerKind::grest2;
  if (name == "grest3") return TrackerKind::grest3;
  if (name == "grest-rsvd") return TrackerKind::grest_rsvd;
  if (name == "timers") return TrackerKind::timers;
  throw std::invalid_argument("unknown tracker kind: " + name);
}

Perturbation to_perturbation(const GraphUpdate& d) {
  return {d.n_old, d.n_new, d.to_delta()};
}

TrackerState tracker_init(const SymSparseMatrix& a0, TrackerKind kind,
                          const TrackerOptions& opts) {
  if (opts.k < 1 || opts.k > a0.size())
    throw std::invalid_argument("tracker_init: k must satisfy 1 <= k <= n");
  if (kind == TrackerKind::timers && opts.restart_inner == TrackerKind::timers)
    throw std::invalid_argument("tracker_init: timers cannot delegate to itself");
  TrackerState s;
  s.kind = kind;
  s.opts = opts;
  s.embedding = solve_leading(a0, opts);
  s.n = a0.size();
  s.restart_scale = s.embedding.values.norm();
  return s;
}

TrackerState trip_basic_step(const TrackerState& s, const Perturbation& p) {
  check_step("trip_basic_step", s, p);
  TrackerState out = s;
  if (p.empty()) return out;

  const Matrix<double> xb = padded_vectors(s.embedding, p.n_new);
  const Matrix<double> dx = matmat(p.delta, xb);
  const Matrix<double> c = xb.transpose() * dx;
  const Vector<double>& lam = s.embedding.values;

  const Vector<double> lam_new = lam + c.diagonal();
  const Matrix<double> b = first_order_coefficients(c, lam);
  Matrix<double> xt = xb + xb * b;

  out.embedding = renormalize_and_sort(lam_new, std::move(xt), s.opts.order);
  out.n = p.n_old + p.n_new;
  return out;
}

TrackerState trip_step(const TrackerState& s, const Perturbation& p) {
  check_step("trip_step", s, p);
  TrackerState out = s;
  if (p.empty()) return out;

  const Matrix<double> xb = padded_vectors(s.embedding, p.n_new);
  const Matrix<double> dx = matmat(p.delta, xb);
  const Matrix<double> c = xb.transpose() * dx;
  const Vector<double>& lam = s.embedding.values;
  const Vector<double> lam_new = lam + c.diagonal();
  const Index k = lam.size();

  Matrix<double> xt(xb.rows(), k);
  for (Index j = 0; j < k; ++j) {
    const Vector<double> rhs = c.col(j);
    Vector<double> bj = Vector<double>::Zero(k);
    if (rhs.cwiseAbs().maxCoeff() > 0.0) {
      Matrix<double> system = -c;
      system.diagonal() += Vector<double>::Constant(k, lam_new(j)) - lam;
      const auto sol = solve_linear_small(system, rhs);
      bj = sol.x;
      out.ridge_used = out.ridge_used || sol.ridge_used;
    }
    if (s.opts.trip_replace_span)
      xt.col(j) = xb * bj;
    else
      xt.col(j) = xb.col(j) + xb * bj;
  }

  out.embedding = renormalize_and_sort(lam_new, std::move(xt), s.opts.order);
  out.n = p.n_old + p.n_new;
  return out;
}

TrackerState residual_modes_step(const TrackerState& s, const Perturbation& p, double mu) {
  check_step("residual_modes_step", s, p);
  TrackerState out = s;
  if (p.empty()) return out;

  const Vector<double>& lam = s.embedding.values;
  const double eps = gap_clamp(lam);
  for (Index j = 0; j < lam.size(); ++j)
    if (std::abs(lam(j) - mu) < eps)
      throw std::invalid_argument("residual_modes_step: mu collides with tracked eigenvalue");

  const Matrix<double> xb = padded_vectors(s.embedding, p.n_new);
  const Matrix<double> dx = matmat(p.delta, xb);
  const Matrix<double> c = xb.transpose() * dx;

  const Vector<double> lam_new = lam + c.diagonal();
  const Matrix<double> b = first_order_coefficients(c, lam);
  const Matrix<double> residual = dx - xb * c;  // (I - XX') D X
  Matrix<double> xt = xb + xb * b;
  for (Index j = 0; j < lam.size(); ++j) xt.col(j) += residual.col(j) / (lam(j) - mu);

  out.embedding = renormalize_and_sort(lam_new, std::move(xt), s.opts.order);
  out.n = p.n_old + p.n_new;
  return out;
}

Matrix<double> build_projection_basis(const TrackerState& s, const Perturbation& p, BasisKind kind,
                                      std::uint64_t seed) {
  check_step("build_projection_basis", s, p);
  const Index n_total = p.n_old + p.n_new;
  const Index k = s.embedding.k();
  const Matrix<double> xb = padded_vectors(s.embedding, p.n_new);

  if (kind == BasisKind::iasc) {
    Matrix<double> z = Matrix<double>::Zero(n_total, k + p.n_new);
    z.topLeftCorner(p.n_old, k) = s.embedding.vectors;
    z.bottomRightCorner(p.n_new, p.n_new).setIdentity();
    return z;
  }

  const Matrix<double> dx = matmat(p.delta, xb);
  const Matrix<double> proj_dx = dx - xb * (xb.transpose() * dx);

  Matrix<double> candidates;
  if (kind == BasisKind::grest2) {
    candidates = proj_dx;
  } else {
    // Trailing-S columns of delta carry every entry that touches a new node.
    const Eigen::SparseMatrix<double> d2 =
        p.delta.csr().middleRows(p.n_old, p.n_new).transpose();
    const bool bypass_rsvd = kind == BasisKind::grest3 || p.n_new <= s.opts.rsvd_l;
    Matrix<double> trailing;
    if (bypass_rsvd) {
      const Matrix<double> d2_dense = Matrix<double>(d2);
      trailing = d2_dense - xb * (xb.transpose() * d2_dense);
    } else {
      RectOperator<double> op;
      op.rows = n_total;
      op.cols = p.n_new;
      op.apply = [&d2, &xb](const Matrix<double>& w) {
        Matrix<double> y = d2 * w;
        y.noalias() -= xb * (xb.transpose() * y);
        return y;
      };
      op.apply_adjoint = [&d2, &xb](const Matrix<double>& y) {
        const Matrix<double> projected = y - xb * (xb.transpose() * y);
        return Matrix<double>(d2.transpose() * projected);
      };
      trailing = rsvd_basis(op, s.opts.rsvd_l, s.opts.rsvd_p, seed);
    }
    candidates.resize(n_total, proj_dx.cols() + trailing.cols());
    candidates.leftCols(proj_dx.cols()) = proj_dx;
    candidates.rightCols(trailing.cols()) = trailing;
  }

  const Matrix<double> extra = orthonormalize(candidates, xb);
  Matrix<double> z(n_total, k + extra.cols());
  z.leftCols(k) = xb;
  z.rightCols(extra.cols()) = extra;
  return z;
}

TrackerState rayleigh_ritz_step(const TrackerState& s, const Perturbation& p,
                                const Matrix<double>& z) {
  check_step("rayleigh_ritz_step", s, p);
  TrackerState out = s;
  if (p.empty()) return out;

  const Index n_total = p.n_old + p.n_new;
  const Index k = s.embedding.k();
  if (z.rows() != n_total)
    throw std::invalid_argument("rayleigh_ritz_step: basis row count mismatch");
  if (z.cols() < k) throw std::invalid_argument("rayleigh_ritz_step: projection subspace too small");
  const Matrix<double> gram = z.transpose() * z;
  if ((gram - Matrix<double>::Identity(z.cols(), z.cols())).cwiseAbs().maxCoeff() > 1e-6)
    throw std::invalid_argument("rayleigh_ritz_step: basis is not column-orthonormal");

  const Matrix<double> xb = padded_vectors(s.embedding, p.n_new);
  const Matrix<double> zx = z.transpose() * xb;  // D x K
  const Matrix<double> dz = matmat(p.delta, z);
  Matrix<double> m = zx * s.embedding.values.asDiagonal() * zx.transpose();
  m.noalias() += z.transpose() * dz;

  const EigResult<double> ritz = sym_eig_dense(m, s.opts.order);
  out.embedding.values = ritz.values.head(k);
  out.embedding.vectors = z * ritz.vectors.leftCols(k);
  out.n = n_total;
  return out;
}

TrackerState timers_step(const TrackerState& s, const Perturbation& p, const StepFn& inner,
                         const MatrixProvider& full_matrix) {
  check_step("timers_step", s, p);
  if (s.opts.theta < 0.0) throw std::invalid_argument("timers_step: theta must be >= 0");

  TrackerState out = s;
  const double denom = s.restart_scale > 0.0 ? s.restart_scale : 1.0;
  out.accumulated_change += p.delta.frobenius_norm() / denom;
  out.steps_since_restart += 1;

  if (out.accumulated_change >= s.opts.theta && out.steps_since_restart >= s.opts.min_restart_gap) {
    if (!full_matrix)
      throw std::invalid_argument("timers_step: restart requires a full-matrix provider");
    const SymSparseMatrix a = full_matrix();
    if (a.size() != p.n_old + p.n_new)
      throw std::invalid_argument("timers_step: provider matrix has the wrong dimension");
    out.embedding = solve_leading(a, s.opts);
    out.n = a.size();
    out.restart_scale = out.embedding.values.norm();
    out.accumulated_change = 0.0;
    out.steps_since_restart = 0;
    return out;
  }

  if (!inner) throw std::invalid_argument("timers_step: missing inner step");
  TrackerState stepped = inner(out, p);
  stepped.accumulated_change = out.accumulated_change;
  stepped.steps_since_restart = out.steps_since_restart;
  return stepped;
}

TrackerState tracker_step(const TrackerState& s, const Perturbation& p,
                          const MatrixProvider& full_matrix) {
  TrackerState out;
  switch (s.kind) {
    case TrackerKind::trip_basic:
      out = trip_basic_step(s, p);
      break;
    case TrackerKind::trip:
      out = trip_step(s, p);
      break;
    case TrackerKind::residual_modes:
      out = residual_modes_step(s, p, s.opts.mu);
      break;
    case TrackerKind::iasc:
    case TrackerKind::grest2:
    case TrackerKind::grest3:
    case TrackerKind::grest_rsvd: {
      if (p.empty()) {
        out = s;
        break;
      }
      const std::uint64_t basis_seed = mix_seed(s.opts.seed, 0x6b7aU, s.steps_taken);
      const Matrix<double> z = build_projection_basis(s, p, basis_kind_of(s.kind), basis_seed);
      out = rayleigh_ritz_step(s, p, z);
      break;
    }
    case TrackerKind::timers: {
      TrackerState inner_view = s;
      inner_view.kind = s.opts.restart_inner;
      const StepFn inner = [](const TrackerState& st, const Perturbation& pt) {
        return tracker_step(st, pt);
      };
      out = timers_step(inner_view, p, inner, full_matrix);
      out.kind = TrackerKind::timers;
      break;
    }
    default:
      throw std::invalid_argument("tracker_step: unknown tracker kind");
  }
  out.steps_taken = s.steps_taken + 1;
  return out;
}

TrackerState tracker_step(const TrackerState& s, const GraphUpdate& d,
                          const MatrixProvider& full_matrix) {
  return tracker_step(s, to_perturbation(d), full_matrix);
}

}  // namespace spectrack
