#pragma once

// Seeded Gaussian sampling with reproducible streams. mt19937_64 output is
// pinned by the standard and the Box-Muller transform below sidesteps the
// implementation-defined std::normal_distribution, so a seed identifies the
// same draw sequence on every platform.

#include <cmath>
#include <cstdint>
#include <random>

#include "spectrack/types.hpp"

namespace spectrack {

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 0x632be59bd9b4e019ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return mix_seed(mix_seed(base, a), b);
}

class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : gen_(seed) {}

  // Uniform draw in [0, 1) built from the top 53 bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  std::uint64_t raw() { return gen_(); }

  // Uniform integer in [0, n); n must be positive. The modulo bias is
  // immaterial at the n used here (far below 2^32).
  Index uniform_index(Index n) {
    return static_cast<Index>(gen_() % static_cast<std::uint64_t>(n));
  }

  // Standard normal draw (Box-Muller, cached spare).
  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(two_pi * u2);
    has_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

  Vector<double> gaussian_vector(Index n) {
    Vector<double> v(n);
    for (Index i = 0; i < n; ++i) v[i] = (*this)();
    return v;
  }

  // Column-major fill so the draw order matches Eigen's storage order.
  Matrix<double> gaussian_matrix(Index rows, Index cols) {
    Matrix<double> m(rows, cols);
    for (Index c = 0; c < cols; ++c)
      for (Index r = 0; r < rows; ++r) m(r, c) = (*this)();
    return m;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace spectrack
