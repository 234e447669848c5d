#include "grasslin/rank_revealing.hpp"

#include <cmath>
#include <limits>

namespace grasslin {

RankDecision numerical_rank(const SvdFactorization& f, double theta,
                            double guard) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw Error(ErrorCode::InvalidArgument, "theta must be positive");

  const double sigma1 = f.sigma.empty() ? 0.0 : f.sigma.front();
  RankDecision decision;
  decision.theta = theta;
  decision.guard = std::numeric_limits<double>::infinity();

  if (sigma1 > 0.0) {
    // The projection is undefined when theta sits on a singular value; a
    // relative band around each sigma_j makes the undefined set detectable.
    for (double s : f.sigma) {
      double sep = std::fabs(theta - s);
      double band = guard * std::max(theta, s);
      if (sep <= band)
        throw Error(ErrorCode::ThetaOnSingularValue,
                    "theta = " + std::to_string(theta) +
                        " within relative guard " + std::to_string(guard) +
                        " of sigma = " + std::to_string(s));
      decision.guard = std::min(decision.guard, sep / sigma1);
    }
  }

  std::size_t r = 0;
  while (r < f.sigma.size() && f.sigma[r] > theta) ++r;
  decision.rank = r;
  if (r > 0) decision.sigma_r = f.sigma[r - 1];
  decision.sigma_r_plus_1 = f.sigma_or_zero(r);
  return decision;
}

RankDecision numerical_rank(const DenseMatrix& A, double theta, double guard) {
  require_finite(A, "numerical_rank");
  return numerical_rank(svd(A), theta, guard);
}

ThetaProjection::ThetaProjection(const SvdFactorization& f,
                                 const RankDecision& decision)
    : rows_(f.source_rows()),
      cols_(f.source_cols()),
      decision_(decision),
      U_r_(f.U.columns(0, decision.rank)),
      sigma_(f.sigma.begin(), f.sigma.begin() + decision.rank),
      V_r_(f.V.columns(0, decision.rank)),
      kernel_(f.V.columns(decision.rank, f.source_cols() - decision.rank)) {}

DenseMatrix ThetaProjection::materialize() const {
  DenseMatrix result(rows_, cols_);
  for (std::size_t j = 0; j < cols_; ++j) {
    Scalar* out = result.col_data(j);
    for (std::size_t l = 0; l < rank(); ++l) {
      Scalar factor = sigma_[l] * std::conj(V_r_(j, l));
      const Scalar* u = U_r_.col_data(l);
      for (std::size_t i = 0; i < rows_; ++i) out[i] += u[i] * factor;
    }
  }
  return result;
}

DenseVector ThetaProjection::apply(const DenseVector& x) const {
  if (x.size() != cols_)
    throw Error(ErrorCode::DimensionMismatch, "theta-projection apply");
  DenseVector result(rows_);
  for (std::size_t l = 0; l < rank(); ++l) {
    Scalar coeff = sigma_[l] * inner(V_r_.column(l), x);
    const Scalar* u = U_r_.col_data(l);
    for (std::size_t i = 0; i < rows_; ++i) result[i] += u[i] * coeff;
  }
  return result;
}

DenseVector ThetaProjection::apply_pinv(const DenseVector& b) const {
  if (b.size() != rows_)
    throw Error(ErrorCode::DimensionMismatch, "theta-projection pinv apply");
  DenseVector result(cols_);
  for (std::size_t l = 0; l < rank(); ++l) {
    Scalar coeff = inner(U_r_.column(l), b) / sigma_[l];
    const Scalar* v = V_r_.col_data(l);
    for (std::size_t i = 0; i < cols_; ++i) result[i] += v[i] * coeff;
  }
  return result;
}

DenseVector ThetaProjection::project_onto_range(const DenseVector& b) const {
  if (b.size() != rows_)
    throw Error(ErrorCode::DimensionMismatch, "range projection");
  DenseVector result(rows_);
  for (std::size_t l = 0; l < rank(); ++l) {
    Scalar coeff = inner(U_r_.column(l), b);
    const Scalar* u = U_r_.col_data(l);
    for (std::size_t i = 0; i < rows_; ++i) result[i] += u[i] * coeff;
  }
  return result;
}

ThetaProjection theta_projection(const SvdFactorization& f, double theta,
                                 double guard) {
  return ThetaProjection(f, numerical_rank(f, theta, guard));
}

ThetaProjection theta_projection(const DenseMatrix& A, double theta,
                                 double guard) {
  require_finite(A, "theta_projection");
  return theta_projection(svd(A), theta, guard);
}

Subspace numerical_kernel(const DenseMatrix& A, double theta, double guard) {
  require_finite(A, "numerical_kernel");
  SvdFactorization f = svd(A);
  RankDecision decision = numerical_rank(f, theta, guard);
  return Subspace::from_orthonormal(
      f.V.columns(decision.rank, A.cols() - decision.rank));
}

std::size_t exact_rank(const SvdFactorization& f, double floor) {
  if (f.sigma.empty() || f.sigma.front() == 0.0) return 0;
  const double cutoff = floor * f.sigma.front();
  std::size_t r = 0;
  while (r < f.sigma.size() && f.sigma[r] > cutoff) ++r;
  return r;
}

DenseMatrix pseudoinverse(const DenseMatrix& A) {
  require_finite(A, "pseudoinverse");
  SvdFactorization f = svd(A);
  const std::size_t r = exact_rank(f);
  DenseMatrix result(A.cols(), A.rows());
  for (std::size_t j = 0; j < A.rows(); ++j) {
    Scalar* out = result.col_data(j);
    for (std::size_t l = 0; l < r; ++l) {
      Scalar factor = std::conj(f.U(j, l)) / f.sigma[l];
      const Scalar* v = f.V.col_data(l);
      for (std::size_t i = 0; i < A.cols(); ++i) out[i] += v[i] * factor;
    }
  }
  return result;
}

DenseMatrix truncated_pseudoinverse(const ThetaProjection& P) {
  DenseMatrix result(P.source_cols(), P.source_rows());
  const DenseMatrix& U = P.left_vectors();
  const DenseMatrix& V = P.right_vectors();
  for (std::size_t j = 0; j < P.source_rows(); ++j) {
    Scalar* out = result.col_data(j);
    for (std::size_t l = 0; l < P.rank(); ++l) {
      Scalar factor = std::conj(U(j, l)) / P.retained_sigma()[l];
      const Scalar* v = V.col_data(l);
      for (std::size_t i = 0; i < P.source_cols(); ++i) out[i] += v[i] * factor;
    }
  }
  return result;
}

Subspace homogeneous_solution(const DenseMatrix& A, double theta, double guard) {
  return numerical_kernel(A, theta, guard);
}

}  // namespace grasslin
