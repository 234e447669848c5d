#include "grasslin/factor.hpp"

#include <algorithm>
#include <cmath>

namespace grasslin {
namespace detail {

namespace {

// Same zlarfg convention as the SVD core: (I - conj(tau) v v^H) x = beta e1.
struct PackedReflector {
  Scalar tau;
  double beta;
};

PackedReflector reflect_column(DenseMatrix& W, std::size_t j) {
  const std::size_t m = W.rows();
  Scalar alpha = W(j, j);
  double xnorm = 0.0;
  for (std::size_t i = j + 1; i < m; ++i)
    xnorm = std::hypot(xnorm, std::abs(W(i, j)));

  if (xnorm == 0.0 && alpha.imag() == 0.0) {
    return {Scalar(0.0, 0.0), alpha.real()};
  }
  double beta = -std::copysign(
      std::hypot(std::hypot(alpha.real(), alpha.imag()), xnorm), alpha.real());
  Scalar tau((beta - alpha.real()) / beta, -alpha.imag() / beta);
  Scalar scale = Scalar(1.0, 0.0) / (alpha - Scalar(beta, 0.0));
  for (std::size_t i = j + 1; i < m; ++i) W(i, j) *= scale;
  return {tau, beta};
}

}  // namespace

HouseholderQr::HouseholderQr(DenseMatrix A)
    : rows_(A.rows()), cols_(A.cols()), k_(std::min(A.rows(), A.cols())),
      work_(std::move(A)), tau_(k_, Scalar(0.0, 0.0)) {
  for (std::size_t j = 0; j < k_; ++j) {
    PackedReflector h = reflect_column(work_, j);
    tau_[j] = h.tau;
    work_(j, j) = Scalar(h.beta, 0.0);
    if (h.tau == Scalar(0.0, 0.0)) continue;
    Scalar ctau = std::conj(h.tau);
    for (std::size_t c = j + 1; c < cols_; ++c) {
      Scalar* col = work_.col_data(c);
      Scalar s = col[j];
      for (std::size_t i = j + 1; i < rows_; ++i)
        s += std::conj(work_(i, j)) * col[i];
      s *= ctau;
      col[j] -= s;
      for (std::size_t i = j + 1; i < rows_; ++i) col[i] -= work_(i, j) * s;
    }
  }
}

DenseVector HouseholderQr::apply_qh(DenseVector b) const {
  if (b.size() != rows_)
    throw Error(ErrorCode::DimensionMismatch, "apply_qh length");
  for (std::size_t j = 0; j < k_; ++j) {
    if (tau_[j] == Scalar(0.0, 0.0)) continue;
    Scalar s = b[j];
    for (std::size_t i = j + 1; i < rows_; ++i)
      s += std::conj(work_(i, j)) * b[i];
    s *= std::conj(tau_[j]);
    b[j] -= s;
    for (std::size_t i = j + 1; i < rows_; ++i) b[i] -= work_(i, j) * s;
  }
  return b;
}

DenseMatrix HouseholderQr::q_columns(std::size_t count) const {
  DenseMatrix Q(rows_, count);
  for (std::size_t j = 0; j < std::min(count, rows_); ++j)
    Q(j, j) = Scalar(1.0, 0.0);
  for (std::size_t j = k_; j-- > 0;) {
    if (tau_[j] == Scalar(0.0, 0.0)) continue;
    for (std::size_t c = 0; c < count; ++c) {
      Scalar* col = Q.col_data(c);
      Scalar s = col[j];
      for (std::size_t i = j + 1; i < rows_; ++i)
        s += std::conj(work_(i, j)) * col[i];
      s *= tau_[j];
      col[j] -= s;
      for (std::size_t i = j + 1; i < rows_; ++i) col[i] -= work_(i, j) * s;
    }
  }
  return Q;
}

DenseMatrix HouseholderQr::r_upper() const {
  DenseMatrix R(k_, cols_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i <= std::min(j, k_ - 1); ++i)
      R(i, j) = work_(i, j);
  return R;
}

double HouseholderQr::r_diag_abs(std::size_t j) const {
  return std::abs(work_(j, j));
}

double HouseholderQr::r_diag_max_abs() const {
  double m = 0.0;
  for (std::size_t j = 0; j < k_; ++j) m = std::max(m, r_diag_abs(j));
  return m;
}

std::optional<DenseVector> HouseholderQr::solve_upper(
    const DenseVector& y) const {
  if (rows_ < cols_) return std::nullopt;
  const double floor = 1e-13 * r_diag_max_abs();
  DenseVector x(cols_);
  for (std::size_t j = cols_; j-- > 0;) {
    if (r_diag_abs(j) <= floor) return std::nullopt;
    Scalar s = y[j];
    for (std::size_t l = j + 1; l < cols_; ++l) s -= work_(j, l) * x[l];
    x[j] = s / work_(j, j);
  }
  return x;
}

std::optional<DenseVector> least_squares_qr(const DenseMatrix& A,
                                            const DenseVector& b) {
  if (A.rows() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "least_squares_qr rows");
  if (A.rows() < A.cols()) return std::nullopt;
  HouseholderQr h(A);
  return h.solve_upper(h.apply_qh(b));
}

DenseMatrix orthonormal_complement(const DenseMatrix& B) {
  const std::size_t n = B.rows();
  const std::size_t k = B.cols();
  if (k == 0) return DenseMatrix::identity(n);
  HouseholderQr h(B);
  DenseMatrix full = h.q_columns(n);
  return full.columns(k, n - k);
}

}  // namespace detail

QrFactorization qr(const DenseMatrix& A) {
  if (A.rows() == 0 || A.cols() == 0)
    throw Error(ErrorCode::InvalidArgument, "qr of empty matrix");
  require_finite(A, "qr");

  detail::HouseholderQr h(A);
  const std::size_t k = std::min(A.rows(), A.cols());
  double maxdiag = h.r_diag_max_abs();
  for (std::size_t j = 0; j < k; ++j) {
    if (h.r_diag_abs(j) <= 1e-14 * std::max(maxdiag, 1e-300))
      throw Error(ErrorCode::DegenerateColumn,
                  "column " + std::to_string(j) + " is numerically dependent");
  }

  QrFactorization f;
  f.Q = h.q_columns(k);
  f.R = h.r_upper();
  // Rotate the real diagonal of R to be nonnegative.
  for (std::size_t j = 0; j < k; ++j) {
    if (f.R(j, j).real() < 0.0) {
      for (std::size_t c = j; c < f.R.cols(); ++c) f.R(j, c) = -f.R(j, c);
      Scalar* col = f.Q.col_data(j);
      for (std::size_t i = 0; i < f.Q.rows(); ++i) col[i] = -col[i];
    }
  }
  return f;
}

}  // namespace grasslin
