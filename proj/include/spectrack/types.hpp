#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace spectrack {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// How eigenpairs are ranked. abs_desc tracks the dominant magnitudes
// (adjacency operators); alg_desc tracks the largest algebraic values
// (shifted Laplacians, whose leading end is the trailing end of L).
enum class SpectralOrder { abs_desc, alg_desc };

// Deterministic ranking permutation: primary key per `order`, ties broken by
// algebraic value descending, then by original position.
template <typename Scalar>
std::vector<Index> spectral_sort(const Vector<Scalar>& values, SpectralOrder order) {
  std::vector<Index> perm(static_cast<std::size_t>(values.size()));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::sort(perm.begin(), perm.end(), [&](Index a, Index b) {
    if (order == SpectralOrder::abs_desc) {
      const Scalar aa = values[a] < Scalar(0) ? -values[a] : values[a];
      const Scalar ab = values[b] < Scalar(0) ? -values[b] : values[b];
      if (aa != ab) return aa > ab;
    }
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  return perm;
}

}  // namespace spectrack
