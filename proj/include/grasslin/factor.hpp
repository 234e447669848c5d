#pragma once

#include <optional>
#include <vector>

#include "grasslin/dense.hpp"

namespace grasslin {

// Full singular value decomposition A = U * diag(sigma) * V^H with
// U (m x m) and V (n x n) unitary and sigma holding min(m, n) values in
// non-increasing order. Singular-vector phases are canonicalized: the
// largest-magnitude component of each right singular vector is rotated to
// the positive real axis (the paired left vector absorbs the same phase).
struct SvdFactorization {
  DenseMatrix U;
  std::vector<double> sigma;
  DenseMatrix V;

  std::size_t source_rows() const { return U.rows(); }
  std::size_t source_cols() const { return V.rows(); }

  double sigma_or_zero(std::size_t j) const {
    return j < sigma.size() ? sigma[j] : 0.0;
  }

  DenseMatrix reconstruct() const;
};

SvdFactorization svd(const DenseMatrix& A);

double spectral_norm(const DenseMatrix& A);
double pair_norm(const DenseMatrix& A, const DenseVector& b);

// Thin QR with orthonormal Q (m x k), upper-triangular R (k x n),
// k = min(m, n), and real nonnegative R diagonal. Flags rank-deficient
// input through DegenerateColumn.
struct QrFactorization {
  DenseMatrix Q;
  DenseMatrix R;
};

QrFactorization qr(const DenseMatrix& A);

namespace detail {

// Compact Householder QR used internally; never raises on rank deficiency.
class HouseholderQr {
 public:
  explicit HouseholderQr(DenseMatrix A);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  // Applies Q^H to a vector of length m.
  DenseVector apply_qh(DenseVector b) const;

  // First `count` columns of Q (count <= m).
  DenseMatrix q_columns(std::size_t count) const;

  DenseMatrix r_upper() const;  // k x n

  double r_diag_abs(std::size_t j) const;
  double r_diag_max_abs() const;

  // Back-substitution of R x = y_head for full-column-rank factors;
  // nullopt when a diagonal entry is negligible relative to the largest.
  std::optional<DenseVector> solve_upper(const DenseVector& y) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t k_;
  DenseMatrix work_;                 // packed reflectors + R
  std::vector<Scalar> tau_;
};

// Least-squares solution of A x = b via Householder QR (m >= n expected);
// nullopt when R is numerically rank deficient.
std::optional<DenseVector> least_squares_qr(const DenseMatrix& A,
                                            const DenseVector& b);

// Orthonormal basis of the orthogonal complement of span(columns of B),
// B assumed to have orthonormal columns; returns n x (n - k).
DenseMatrix orthonormal_complement(const DenseMatrix& B);

}  // namespace detail

}  // namespace grasslin
