#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "grasslin/dense.hpp"

namespace grasslin {

// Deterministic random source. Distributions are implemented here rather
// than with std:: distribution objects so that a seed yields identical
// streams across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double phi = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  Scalar complex_gaussian() { return Scalar(gaussian(), gaussian()); }

  DenseVector vector(std::size_t n) {
    DenseVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = complex_gaussian();
    return v;
  }

  DenseMatrix matrix(std::size_t m, std::size_t n) {
    DenseMatrix a(m, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < m; ++i) a(i, j) = complex_gaussian();
    return a;
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Random unitary via Householder QR of a Gaussian matrix.
DenseMatrix random_unitary(Rng& rng, std::size_t n);

// U * diag(sigma) * V^H with fresh random unitary factors.
DenseMatrix matrix_with_spectrum(Rng& rng, std::size_t m, std::size_t n,
                                 const std::vector<double>& sigma);

}  // namespace grasslin
