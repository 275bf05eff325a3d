#pragma once

// Restarted Lanczos for the leading eigenpairs of a symmetric operator given
// only matrix-vector products.
//
// The basis is expanded one product per vector with full reorthogonalization
// (two Gram-Schmidt passes against every retained vector), so the projected
// matrix H = V'AV is assembled explicitly rather than relying on the
// three-term recurrence staying clean. When the basis hits max_basis a thick
// restart compresses it onto the best Ritz vectors (A*V is cached, so the
// compression costs no extra products) and expansion resumes from the
// residual of the first unconverged pair, which in exact arithmetic is the
// Lanczos continuation direction.
//
// Convergence: ||A x_i - theta_i x_i|| <= tol * max|theta| for each of the k
// requested pairs. Failure to converge within max_restarts throws, reporting
// the best residuals reached.

#include <functional>
#include <sstream>
#include <stdexcept>

#include "spectrack/eig.hpp"
#include "spectrack/rng.hpp"
#include "spectrack/types.hpp"

namespace spectrack {

struct LanczosOptions {
  Index k = 1;
  SpectralOrder order = SpectralOrder::abs_desc;
  double tol = 1e-10;
  Index max_basis = 0;  // 0 selects max(2k + 20, 40)
  std::uint64_t seed = 0;
  Index max_restarts = 500;
};

template <typename Scalar>
EigResult<Scalar> lanczos_topk(const std::function<Vector<Scalar>(const Vector<Scalar>&)>& apply,
                               Index n, const LanczosOptions& opts) {
  if (!apply) throw std::invalid_argument("lanczos_topk: missing operator");
  if (n < 1) throw std::invalid_argument("lanczos_topk: empty operator");
  if (opts.k < 1 || opts.k > n)
    throw std::invalid_argument("lanczos_topk: k must satisfy 1 <= k <= n");
  Index m = opts.max_basis > 0 ? opts.max_basis : std::max<Index>(2 * opts.k + 20, 40);
  if (m < opts.k) throw std::invalid_argument("lanczos_topk: max_basis below k");
  m = std::min(m, n);

  GaussianSampler rng(mix_seed(opts.seed, 0x1a2cU));
  Matrix<Scalar> v_basis(n, m), w_basis(n, m);
  Vector<Scalar> v = rng.gaussian_vector(n).template cast<Scalar>();
  Index j = 0;
  Scalar a_norm = 0;
  double best_worst_res = std::numeric_limits<double>::infinity();

  for (Index restart = 0;; ++restart) {
    // Expansion with full reorthogonalization.
    int fresh_draws = 0;
    while (j < m) {
      for (int pass = 0; pass < 2; ++pass)
        if (j > 0) v.noalias() -= v_basis.leftCols(j) * (v_basis.leftCols(j).transpose() * v);
      const Scalar nrm = v.norm();
      if (!(nrm > Scalar(1e-12))) {
        if (++fresh_draws > 4) break;  // invariant subspace; solve with what we have
        v = rng.gaussian_vector(n).template cast<Scalar>();
        continue;
      }
      fresh_draws = 0;
      v /= nrm;
      v_basis.col(j) = v;
      Vector<Scalar> w = apply(v);
      if (w.size() != n) throw std::invalid_argument("lanczos_topk: operator changed dimension");
      if (!w.allFinite()) throw std::runtime_error("lanczos_topk: operator produced non-finite values");
      w_basis.col(j) = w;
      v = std::move(w);
      ++j;
    }
    if (j == 0) throw std::runtime_error("lanczos_topk: could not build a starting basis");

    // Rayleigh-Ritz on the retained basis.
    Matrix<Scalar> h = v_basis.leftCols(j).transpose() * w_basis.leftCols(j);
    const EigResult<Scalar> ritz = sym_eig_dense(h, opts.order);
    const Index kk = std::min(opts.k, j);
    const Matrix<Scalar> fk = ritz.vectors.leftCols(kk);
    Matrix<Scalar> x = v_basis.leftCols(j) * fk;
    Matrix<Scalar> res = w_basis.leftCols(j) * fk - x * ritz.values.head(kk).asDiagonal();

    a_norm = std::max(a_norm, ritz.values.cwiseAbs().maxCoeff());
    const Scalar scale = std::max<Scalar>(a_norm, Scalar(1e-300));
    Index first_unconverged = -1;
    double worst = 0.0;
    for (Index i = 0; i < kk; ++i) {
      const double r = res.col(i).norm();
      worst = std::max(worst, r);
      if (first_unconverged < 0 && r > opts.tol * static_cast<double>(scale))
        first_unconverged = i;
    }
    best_worst_res = std::min(best_worst_res, worst);

    if ((first_unconverged < 0 && kk == opts.k) || j >= n) {
      EigResult<Scalar> out;
      out.values = ritz.values.head(kk);
      out.vectors = std::move(x);
      return out;
    }
    if (restart >= opts.max_restarts) {
      std::ostringstream msg;
      msg << "lanczos_topk: no convergence after " << opts.max_restarts
          << " restarts (best worst-case residual " << best_worst_res << ", tol "
          << opts.tol * static_cast<double>(scale) << ")";
      throw std::runtime_error(msg.str());
    }

    // Thick restart: compress onto the leading Ritz vectors, then continue
    // from the first unconverged residual.
    const Index keep = std::min<Index>(j - 1 > 0 ? j - 1 : j, opts.k + std::min<Index>(opts.k, 10) + 2);
    const Matrix<Scalar> f_keep = ritz.vectors.leftCols(keep);
    const Matrix<Scalar> v_new = v_basis.leftCols(j) * f_keep;
    const Matrix<Scalar> w_new = w_basis.leftCols(j) * f_keep;
    v_basis.leftCols(keep) = v_new;
    w_basis.leftCols(keep) = w_new;
    j = keep;
    const Index pick = first_unconverged >= 0 ? first_unconverged : kk - 1;
    v = res.col(pick);
    if (!(v.norm() > Scalar(0))) v = rng.gaussian_vector(n).template cast<Scalar>();
  }
}

}  // namespace spectrack
