#include "spectrack/metrics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "spectrack/ortho.hpp"
#include "spectrack/rng.hpp"

namespace spectrack {

double principal_angle(const Vector<double>& x, const Vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vector lengths differ");
  const double nx = x.norm(), ny = y.norm();
  if (nx == 0.0 || ny == 0.0) throw std::invalid_argument("zero vector has no angle");
  // arccos(|u'v|) evaluated as 2*atan2(||u - v||, ||u + v||) after a sign
  // flip: identical inputs give exactly 0 and orthogonal ones exactly pi/2,
  // where the plain arccos loses half the significant digits.
  const Vector<double> u = x / nx;
  const Vector<double> v = u.dot(y) < 0.0 ? Vector<double>(-y / ny) : Vector<double>(y / ny);
  return 2.0 * std::atan2((u - v).norm(), (u + v).norm());
}

namespace {

// log of the largest double, with headroom
constexpr double kExpOverflow = 700.0;

double horner(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace

ScaledVector matrix_function_apply(const SpectralEmbedding& e, const MatrixFunction& h,
                                   const Vector<double>& v) {
  if (v.size() != e.n()) throw std::invalid_argument("vector length does not match embedding");
  ScaledVector out;
  Vector<double> weights(e.k());
  if (h.kind == MatrixFunction::Kind::exponential) {
    const double top = e.k() > 0 ? e.values.maxCoeff() : 0.0;
    if (top > kExpOverflow) out.log_scale = top;
    for (Index i = 0; i < e.k(); ++i) weights(i) = std::exp(e.values(i) - out.log_scale);
  } else {
    for (Index i = 0; i < e.k(); ++i) weights(i) = horner(h.coefficients, e.values(i));
  }
  out.y = e.vectors * (weights.asDiagonal() * (e.vectors.transpose() * v));
  return out;
}

std::vector<Index> subgraph_centrality_topj(const SpectralEmbedding& e, Index j) {
  if (j < 0 || j > e.n()) throw std::invalid_argument("j exceeds the node count");
  const ScaledVector sc =
      matrix_function_apply(e, MatrixFunction::exponential(), Vector<double>::Ones(e.n()));
  std::vector<Index> ids(static_cast<std::size_t>(e.n()));
  std::iota(ids.begin(), ids.end(), Index{0});
  std::sort(ids.begin(), ids.end(), [&](Index a, Index b) {
    if (sc.y(a) != sc.y(b)) return sc.y(a) > sc.y(b);
    return a < b;
  });
  ids.resize(static_cast<std::size_t>(j));
  return ids;
}

double top_j_overlap(const std::vector<Index>& est, const std::vector<Index>& ref, Index j) {
  if (static_cast<Index>(est.size()) != j || static_cast<Index>(ref.size()) != j)
    throw std::invalid_argument("top-j lists must both have length j");
  if (j == 0) return 1.0;
  std::vector<Index> a = est, b = ref;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<Index> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(j);
}

namespace {

double squared_distance(const Matrix<double>& points, Index row, const Matrix<double>& centers,
                        Index c) {
  return (points.row(row) - centers.row(c)).squaredNorm();
}

Matrix<double> kmeanspp_init(const Matrix<double>& points, int k, GaussianSampler& rng) {
  const Index n = points.rows();
  Matrix<double> centers(k, points.cols());
  centers.row(0) = points.row(rng.uniform_index(n));
  Vector<double> dist2(n);
  for (Index i = 0; i < n; ++i) dist2(i) = squared_distance(points, i, centers, 0);
  for (int c = 1; c < k; ++c) {
    const double total = dist2.sum();
    Index pick = 0;
    if (total > 0.0) {
      double u = rng.uniform() * total;
      for (Index i = 0; i < n; ++i) {
        u -= dist2(i);
        if (u <= 0.0) {
          pick = i;
          break;
        }
        pick = i;  // numeric slack: fall through to the last row
      }
    } else {
      pick = rng.uniform_index(n);
    }
    centers.row(c) = points.row(pick);
    for (Index i = 0; i < n; ++i)
      dist2(i) = std::min(dist2(i), squared_distance(points, i, centers, c));
  }
  return centers;
}

struct LloydRun {
  std::vector<int> labels;
  double inertia = 0.0;
};

LloydRun lloyd(const Matrix<double>& points, Matrix<double> centers, int k) {
  const Index n = points.rows();
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  double prev_inertia = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 300; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = squared_distance(points, i, centers, 0);
      for (int c = 1; c < k; ++c) {
        const double d = squared_distance(points, i, centers, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (labels[static_cast<std::size_t>(i)] != best) {
        labels[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
      inertia += best_d;
    }
    if (!changed && iter > 0) return {labels, inertia};
    // recompute means; an empty cluster keeps its previous center
    Matrix<double> sums = Matrix<double>::Zero(k, points.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
      ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < k; ++c)
      if (counts[static_cast<std::size_t>(c)] > 0)
        centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
    if (prev_inertia - inertia <= 1e-6 * std::max(1.0, inertia)) return {labels, inertia};
    prev_inertia = inertia;
  }
  return {labels, prev_inertia};
}

}  // namespace

Partition kmeans_cluster(const Matrix<double>& points, int k, std::uint64_t seed, int n_init) {
  const Index n = points.rows();
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (n < k) throw std::invalid_argument("fewer points than clusters");
  if (n_init < 1) throw std::invalid_argument("n_init must be positive");

  LloydRun best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < n_init; ++r) {
    GaussianSampler rng(mix_seed(seed, 0x6d6bu, static_cast<std::uint64_t>(r)));
    LloydRun run = lloyd(points, kmeanspp_init(points, k, rng), k);
    if (run.inertia < best.inertia) best = std::move(run);
  }

  // compact relabeling by first appearance
  std::unordered_map<int, int> remap;
  Partition out;
  out.labels.reserve(best.labels.size());
  for (const int l : best.labels) {
    const auto [it, fresh] = remap.try_emplace(l, static_cast<int>(remap.size()));
    out.labels.push_back(it->second);
    (void)fresh;
  }
  return out;
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("partition lengths differ");
  const double n = static_cast<double>(a.size());
  if (a.size() < 2) return 1.0;

  std::unordered_map<int, int> ra, rb;
  for (const int l : a) ra.try_emplace(l, static_cast<int>(ra.size()));
  for (const int l : b) rb.try_emplace(l, static_cast<int>(rb.size()));
  Matrix<double> table = Matrix<double>::Zero(static_cast<Index>(ra.size()),
                                              static_cast<Index>(rb.size()));
  for (std::size_t i = 0; i < a.size(); ++i) table(ra.at(a[i]), rb.at(b[i])) += 1.0;

  const auto comb2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double sum_cells = 0.0;
  for (Index i = 0; i < table.rows(); ++i)
    for (Index j = 0; j < table.cols(); ++j) sum_cells += comb2(table(i, j));
  double sum_rows = 0.0, sum_cols = 0.0;
  for (Index i = 0; i < table.rows(); ++i) sum_rows += comb2(table.row(i).sum());
  for (Index j = 0; j < table.cols(); ++j) sum_cols += comb2(table.col(j).sum());

  const double expected = sum_rows * sum_cols / comb2(n);
  const double maximum = 0.5 * (sum_rows + sum_cols);
  if (maximum - expected == 0.0) return 1.0;  // both partitions trivial
  return (sum_cells - expected) / (maximum - expected);
}

AngleSummary angle_summaries(const std::vector<SpectralEmbedding>& reference,
                             const std::vector<SpectralEmbedding>& estimate, Index top_m) {
  if (reference.size() != estimate.size())
    throw std::invalid_argument("sequence lengths differ");
  const Index steps = static_cast<Index>(reference.size());
  const Index k = steps > 0 ? reference.front().k() : 0;
  if (top_m < 1 || top_m > k) throw std::invalid_argument("top_m must be in [1, K]");

  Matrix<double> psi(steps, k);
  for (Index t = 0; t < steps; ++t) {
    const auto& ref = reference[static_cast<std::size_t>(t)];
    const auto& est = estimate[static_cast<std::size_t>(t)];
    if (ref.k() != k || est.k() != k || ref.n() != est.n())
      throw std::invalid_argument("embedding shapes misaligned");
    for (Index i = 0; i < k; ++i)
      psi(t, i) = principal_angle(ref.vectors.col(i), est.vectors.col(i));
  }

  AngleSummary out;
  out.per_vector_time_mean = psi.colwise().mean();
  out.per_time_vector_mean = psi.leftCols(top_m).rowwise().mean();
  return out;
}

double subspace_largest_angle(const Matrix<double>& x, const Matrix<double>& y) {
  if (x.rows() != y.rows()) throw std::invalid_argument("row counts differ");
  Matrix<double> qa = orthonormalize(x);
  Matrix<double> qb = orthonormalize(y);
  if (qa.cols() == 0 || qb.cols() == 0)
    throw std::invalid_argument("empty subspace has no angle");
  if (qa.cols() > qb.cols()) std::swap(qa, qb);
  // cosine from the cross-Gram spectrum, sine from the projection residual;
  // atan2 of the pair stays accurate at both ends of [0, pi/2]
  const Matrix<double> g = qa.transpose() * qb;
  const double c = Eigen::JacobiSVD<Matrix<double>>(g).singularValues().minCoeff();
  const Matrix<double> residual = qa - qb * (g.transpose());
  const double s = residual.cwiseAbs().maxCoeff() == 0.0
                       ? 0.0
                       : Eigen::JacobiSVD<Matrix<double>>(residual).singularValues().maxCoeff();
  return std::atan2(s, std::max(c, 0.0));
}

}  // namespace spectrack
