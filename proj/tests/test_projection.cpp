#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "spectrack/eig.hpp"
#include "spectrack/ortho.hpp"
#include "spectrack/rng.hpp"
#include "spectrack/trackers.hpp"
#include "support/test_support.hpp"

using namespace spectrack;
namespace st = spectrack::testing;

namespace {

TrackerOptions opts_of(Index k, std::uint64_t seed = 0) {
  TrackerOptions o;
  o.k = k;
  o.seed = seed;
  return o;
}

SymSparseMatrix random_graph(Index n, double p, std::uint64_t seed) {
  return SymSparseMatrix::from_edges(n, st::random_edges(n, p, seed));
}

double span_residual(const Matrix<double>& z, const Matrix<double>& cols) {
  if (cols.cols() == 0) return 0.0;
  return (cols - z * (z.transpose() * cols)).norm();
}

GraphUpdate mixed_update(Index n_old) {
  return assemble_update(
      n_old, {{0, 4, 1.0}, {1, 5, 1.0}}, {}, 3,
      {{2, n_old, 1.0}, {3, n_old + 1, 1.0}, {6, n_old + 2, 1.0}, {n_old, n_old + 1, 1.0}});
}

}  // namespace

TEST_CASE("the iasc basis is the padded identity extension") {
  const SymSparseMatrix a = random_graph(12, 0.3, 7);
  const TrackerState s = tracker_init(a, TrackerKind::iasc, opts_of(3));
  const GraphUpdate up = mixed_update(12);
  const Matrix<double> z = build_projection_basis(s, to_perturbation(up), BasisKind::iasc, 1);
  REQUIRE(z.rows() == 15);
  REQUIRE(z.cols() == 6);
  CHECK((z.topLeftCorner(12, 3).array() == s.embedding.vectors.array()).all());
  CHECK((z.bottomRightCorner(3, 3) - Matrix<double>::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(z.topRightCorner(12, 3).cwiseAbs().maxCoeff() == 0.0);
  CHECK(z.bottomLeftCorner(3, 3).cwiseAbs().maxCoeff() == 0.0);
  CHECK(st::orthonormality_error(z) <= 1e-12);
}

TEST_CASE("grest2 keeps the old basis and captures the perturbed directions") {
  const SymSparseMatrix a = random_graph(12, 0.3, 8);
  const TrackerState s = tracker_init(a, TrackerKind::grest2, opts_of(3));
  const GraphUpdate up = mixed_update(12);
  const Perturbation p = to_perturbation(up);
  const Matrix<double> z = build_projection_basis(s, p, BasisKind::grest2, 1);

  REQUIRE(z.rows() == 15);
  CHECK(z.cols() <= 6);
  Matrix<double> xb = Matrix<double>::Zero(15, 3);
  xb.topRows(12) = s.embedding.vectors;
  CHECK((z.leftCols(3).array() == xb.array()).all());
  CHECK(st::orthonormality_error(z) <= 1e-10);

  const Matrix<double> dx = matmat(up.to_delta(), xb);
  CHECK(span_residual(z, dx) <= 1e-8 * std::max(1.0, dx.norm()));
}

TEST_CASE("a basis from an empty perturbation is the padded old basis") {
  const SymSparseMatrix a = random_graph(10, 0.3, 9);
  const TrackerState s = tracker_init(a, TrackerKind::grest2, opts_of(4));
  const Matrix<double> z =
      build_projection_basis(s, to_perturbation(make_empty_update(10)), BasisKind::grest2, 1);
  CHECK(z.rows() == 10);
  CHECK(z.cols() == 4);
  CHECK((z.array() == s.embedding.vectors.array()).all());
}

TEST_CASE("grest3 extends grest2 with the new-column range") {
  const SymSparseMatrix a = random_graph(12, 0.3, 10);
  const TrackerState s = tracker_init(a, TrackerKind::grest3, opts_of(3));
  const GraphUpdate up = mixed_update(12);
  const Perturbation p = to_perturbation(up);
  const Matrix<double> z2 = build_projection_basis(s, p, BasisKind::grest2, 1);
  const Matrix<double> z3 = build_projection_basis(s, p, BasisKind::grest3, 1);

  CHECK(z3.cols() >= z2.cols());
  CHECK(z3.cols() <= z2.cols() + 3);
  CHECK(span_residual(z3, z2) <= 1e-8);

  // The trailing columns of the full perturbation are inside the span too.
  const Matrix<double> delta_dense = to_dense(up.to_delta());
  const Matrix<double> d2 = delta_dense.rightCols(3);
  CHECK(span_residual(z3, d2) <= 1e-8 * std::max(1.0, d2.norm()));
  CHECK(st::orthonormality_error(z3) <= 1e-10);
}

TEST_CASE("a single new node contributes at most one extra direction") {
  const SymSparseMatrix a = random_graph(12, 0.3, 11);
  const TrackerState s = tracker_init(a, TrackerKind::grest3, opts_of(3));
  const GraphUpdate up =
      assemble_update(12, {}, {}, 1, {{0, 12, 1.0}, {4, 12, 1.0}, {9, 12, 1.0}});
  const Perturbation p = to_perturbation(up);
  const Matrix<double> z2 = build_projection_basis(s, p, BasisKind::grest2, 1);
  const Matrix<double> z3 = build_projection_basis(s, p, BasisKind::grest3, 1);
  CHECK(z3.cols() <= z2.cols() + 1);
}

TEST_CASE("grest_rsvd falls back to the exact path for few new nodes") {
  const SymSparseMatrix a = random_graph(12, 0.3, 12);
  TrackerOptions o = opts_of(3);
  o.rsvd_l = 8;  // >= n_new: bypass
  const TrackerState s = tracker_init(a, TrackerKind::grest_rsvd, o);
  const GraphUpdate up = mixed_update(12);
  const Perturbation p = to_perturbation(up);
  const Matrix<double> z3 = build_projection_basis(s, p, BasisKind::grest3, 5);
  const Matrix<double> zr = build_projection_basis(s, p, BasisKind::grest_rsvd, 5);
  CHECK((z3.array() == zr.array()).all());
}

TEST_CASE("grest_rsvd recovers the full span when ranks are small") {
  const SymSparseMatrix a = random_graph(14, 0.3, 13);
  TrackerOptions o = opts_of(3);
  o.rsvd_l = 2;
  o.rsvd_p = 2;
  const TrackerState s = tracker_init(a, TrackerKind::grest_rsvd, o);
  // Three new nodes with identical neighborhoods: the new-column block has
  // rank one, well under the sketch size.
  const GraphUpdate up = assemble_update(
      14, {}, {}, 3, {{1, 14, 1.0}, {6, 14, 1.0}, {1, 15, 1.0}, {6, 15, 1.0}, {1, 16, 1.0},
                      {6, 16, 1.0}});
  const Perturbation p = to_perturbation(up);
  const Matrix<double> z3 = build_projection_basis(s, p, BasisKind::grest3, 5);
  const Matrix<double> zr = build_projection_basis(s, p, BasisKind::grest_rsvd, 5);
  CHECK(st::orthonormality_error(zr) <= 1e-10);
  // Same subspace either way.
  CHECK(span_residual(z3, zr) <= 1e-8);
  CHECK(span_residual(zr, z3) <= 1e-8);
}

// The step projects the working model of the updated matrix: the rank-K
// compression of the old matrix plus the exact update. With a full-rank old
// embedding (K = n_old) that model coincides with the true matrix, so Ritz
// extraction from an invariant subspace must be exact.
TEST_CASE("rayleigh_ritz recovers exact pairs from an invariant subspace") {
  const SymSparseMatrix a = random_graph(8, 0.5, 14);
  const GraphUpdate up =
      assemble_update(8, {{0, 5, 1.0}}, {}, 2, {{3, 8, 1.0}, {6, 9, 1.0}, {8, 9, 1.0}});
  const SymSparseMatrix a_next = apply_update(a, up);
  const auto oracle = sym_eig_dense(to_dense(a_next), SpectralOrder::abs_desc);

  const TrackerState s = tracker_init(a, TrackerKind::grest2, opts_of(8));
  const Matrix<double> z = oracle.vectors.leftCols(8);
  const TrackerState r = rayleigh_ritz_step(s, to_perturbation(up), z);
  REQUIRE(r.embedding.k() == 8);
  for (Index j = 0; j < 8; ++j) {
    CHECK(r.embedding.values(j) == doctest::Approx(oracle.values(j)).epsilon(1e-9));
    CHECK(st::col_angle(r.embedding.vectors.col(j), oracle.vectors.col(j)) <= 1e-7);
  }
}

TEST_CASE("rayleigh_ritz over the full space is exact for a full-rank state") {
  const SymSparseMatrix a = random_graph(10, 0.4, 15);
  const GraphUpdate up = assemble_update(10, {{0, 5, 1.0}}, {}, 1, {{2, 10, 1.0}});
  const SymSparseMatrix a_next = apply_update(a, up);
  const auto oracle = sym_eig_dense(to_dense(a_next), SpectralOrder::abs_desc);

  const TrackerState s = tracker_init(a, TrackerKind::grest3, opts_of(10));
  const TrackerState r =
      rayleigh_ritz_step(s, to_perturbation(up), Matrix<double>::Identity(11, 11));
  for (Index j = 0; j < 10; ++j) {
    CHECK(r.embedding.values(j) == doctest::Approx(oracle.values(j)).epsilon(1e-9));
    CHECK(st::col_angle(r.embedding.vectors.col(j), oracle.vectors.col(j)) <= 1e-7);
  }
}

TEST_CASE("rayleigh_ritz validates its subspace argument") {
  const SymSparseMatrix a = random_graph(10, 0.3, 16);
  const TrackerState s = tracker_init(a, TrackerKind::grest2, opts_of(4));
  const GraphUpdate up = assemble_update(10, {{0, 3, 1.0}}, {}, 0, {});
  const Perturbation p = to_perturbation(up);

  CHECK_THROWS_WITH_AS(rayleigh_ritz_step(s, p, Matrix<double>::Identity(10, 3)),
                       doctest::Contains("projection subspace too small"), std::invalid_argument);
  Matrix<double> skew = Matrix<double>::Identity(10, 5);
  skew(0, 1) = 0.5;  // grossly non-orthonormal
  CHECK_THROWS_AS(rayleigh_ritz_step(s, p, skew), std::invalid_argument);
  CHECK_THROWS_AS(rayleigh_ritz_step(s, p, Matrix<double>::Identity(9, 5)),
                  std::invalid_argument);
}

namespace {

// The operator the projection step works against: the rank-K compression of
// the old matrix plus the exact update.
Matrix<double> working_model(const TrackerState& s, const GraphUpdate& up) {
  Matrix<double> xb = Matrix<double>::Zero(s.n + up.n_new, s.embedding.k());
  xb.topRows(s.n) = s.embedding.vectors;
  return xb * s.embedding.values.asDiagonal() * xb.transpose() + to_dense(up.to_delta());
}

double frob_residual(const Matrix<double>& m, const Matrix<double>& x, const Vector<double>& v) {
  return (m * x - x * v.asDiagonal()).norm();
}

}  // namespace

TEST_CASE("projection trackers dominate their own basis members") {
  // Ritz extraction minimizes the residual of the projected operator over the
  // subspace, so estimates drawn from the same subspace can never beat it.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SymSparseMatrix a = random_graph(40, 0.15, 900 + seed);
    GaussianSampler rng(1000 + seed);
    const Index i = rng.uniform_index(40), j = (i + 1 + rng.uniform_index(39)) % 40;
    const GraphUpdate up = assemble_update(40, {{std::min(i, j), std::max(i, j), 1.0}}, {}, 1,
                                           {{rng.uniform_index(40), 40, 1.0}});

    const TrackerState s = tracker_init(a, TrackerKind::grest2, opts_of(4, seed));
    const Perturbation p = to_perturbation(up);
    const TrackerState rr = tracker_step(s, p);
    const TrackerState rm = residual_modes_step(s, p, 0.0);

    const Matrix<double> model = working_model(s, up);
    CHECK(frob_residual(model, rr.embedding.vectors, rr.embedding.values) <=
          frob_residual(model, rm.embedding.vectors, rm.embedding.values) + 1e-10);
  }
}

TEST_CASE("ritz residuals also dominate random coefficients in the basis") {
  const SymSparseMatrix a = random_graph(30, 0.2, 17);
  const GraphUpdate up = mixed_update(30);
  const TrackerState s = tracker_init(a, TrackerKind::grest3, opts_of(4));
  const Perturbation p = to_perturbation(up);
  const Matrix<double> z = build_projection_basis(s, p, BasisKind::grest3, 3);
  const TrackerState rr = rayleigh_ritz_step(s, p, z);

  const Matrix<double> model = working_model(s, up);
  const double best = frob_residual(model, rr.embedding.vectors, rr.embedding.values);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    GaussianSampler rng(seed);
    const Matrix<double> f = orthonormalize(rng.gaussian_matrix(z.cols(), 4));
    const Matrix<double> x = z * f;
    Vector<double> vals(4);
    for (Index c = 0; c < 4; ++c) vals(c) = x.col(c).dot(model * x.col(c));
    CHECK(best <= frob_residual(model, x, vals) + 1e-10);
  }
}

TEST_CASE("new-column blocks have rank bounded by touched rows and width") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GaussianSampler rng(2000 + seed);
    const Index n_old = 10 + rng.uniform_index(20);
    const Index s_new = 1 + rng.uniform_index(4);
    std::vector<std::tuple<Index, Index, double>> new_edges;
    for (Index c = 0; c < s_new; ++c) {
      const Index fan = 1 + rng.uniform_index(3);
      for (Index e = 0; e < fan; ++e) {
        const Index old = rng.uniform_index(n_old);
        new_edges.emplace_back(old, n_old + c, 1.0);
      }
    }
    GraphUpdate up;
    try {
      up = assemble_update(n_old, {}, {}, s_new, new_edges);
    } catch (const std::invalid_argument&) {
      continue;  // duplicate pair drawn: skip this instance
    }
    const Matrix<double> delta = to_dense(up.to_delta());
    const Matrix<double> d2 = delta.rightCols(s_new);
    Index touched = 0;
    for (Index r = 0; r < d2.rows(); ++r)
      if (d2.row(r).cwiseAbs().maxCoeff() > 0.0) ++touched;
    const Eigen::JacobiSVD<Matrix<double>> svd(d2);
    Index rank = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 1e-10) ++rank;
    CHECK(rank <= std::min(touched, s_new));
  }
}
