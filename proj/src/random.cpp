#include "grasslin/random.hpp"

#include "grasslin/factor.hpp"

namespace grasslin {

DenseMatrix random_unitary(Rng& rng, std::size_t n) {
  detail::HouseholderQr h(rng.matrix(n, n));
  DenseMatrix Q = h.q_columns(n);
  // Gaussian input makes degeneracy a probability-zero event; no rank check.
  return Q;
}

DenseMatrix matrix_with_spectrum(Rng& rng, std::size_t m, std::size_t n,
                                 const std::vector<double>& sigma) {
  DenseMatrix U = random_unitary(rng, m);
  DenseMatrix V = random_unitary(rng, n);
  const std::size_t k = std::min(std::min(m, n), sigma.size());
  DenseMatrix A(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    Scalar* out = A.col_data(j);
    for (std::size_t l = 0; l < k; ++l) {
      Scalar f = sigma[l] * std::conj(V(j, l));
      const Scalar* u = U.col_data(l);
      for (std::size_t i = 0; i < m; ++i) out[i] += u[i] * f;
    }
  }
  return A;
}

}  // namespace grasslin
