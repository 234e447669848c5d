#include "grasslin/grassmann.hpp"

#include <algorithm>
#include <cmath>

#include "grasslin/rank_revealing.hpp"

namespace grasslin {

namespace {

// Projector product B (B^H x) without forming B B^H.
DenseVector project_onto(const DenseMatrix& basis, const DenseVector& x) {
  DenseVector result(basis.rows());
  for (std::size_t j = 0; j < basis.cols(); ++j) {
    Scalar coeff = inner(basis.column(j), x);
    const Scalar* col = basis.col_data(j);
    for (std::size_t i = 0; i < basis.rows(); ++i) result[i] += col[i] * coeff;
  }
  return result;
}

DenseMatrix projector(const DenseMatrix& basis, std::size_t n) {
  DenseMatrix P(n, n);
  for (std::size_t l = 0; l < basis.cols(); ++l) {
    const Scalar* col = basis.col_data(l);
    for (std::size_t j = 0; j < n; ++j) {
      Scalar factor = std::conj(col[j]);
      Scalar* out = P.col_data(j);
      for (std::size_t i = 0; i < n; ++i) out[i] += col[i] * factor;
    }
  }
  return P;
}

}  // namespace

Subspace Subspace::from_orthonormal(DenseMatrix basis) {
  const std::size_t n = basis.rows();
  const std::size_t k = basis.cols();
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      Scalar g = inner(basis.column(a), basis.column(b));
      Scalar expected = (a == b) ? Scalar(1.0, 0.0) : Scalar(0.0, 0.0);
      if (std::abs(g - expected) > 1e-12)
        throw Error(ErrorCode::InvalidArgument,
                    "basis columns are not orthonormal");
    }
  }
  return Subspace(n, std::move(basis));
}

Subspace Subspace::orthonormalize(const DenseMatrix& spanning) {
  if (spanning.cols() == 0)
    return Subspace(spanning.rows(), DenseMatrix(spanning.rows(), 0));
  QrFactorization f = qr(spanning);
  return Subspace(spanning.rows(), std::move(f.Q));
}

Subspace Subspace::trivial(std::size_t ambient_dim) {
  return Subspace(ambient_dim, DenseMatrix(ambient_dim, 0));
}

DenseVector Subspace::project(const DenseVector& x) const {
  if (x.size() != ambient_dim_)
    throw Error(ErrorCode::DimensionMismatch, "subspace projection");
  return project_onto(basis_, x);
}

DenseVector Subspace::reject(const DenseVector& x) const {
  return x - project(x);
}

double grassmann_distance(const Subspace& P, const Subspace& Q) {
  if (P.ambient_dim() != Q.ambient_dim())
    throw Error(ErrorCode::DimensionMismatch, "ambient dimensions differ");
  if (P.dim() != Q.dim())
    throw Error(ErrorCode::DimensionMismatch, "subspace indices differ");
  if (P.dim() == 0) return 0.0;
  const std::size_t n = P.ambient_dim();
  DenseMatrix diff = projector(P.basis(), n) - projector(Q.basis(), n);
  return std::clamp(spectral_norm(diff), 0.0, 1.0);
}

AffineSolution canonicalize_affine(const DenseVector& point, const Subspace& V) {
  if (point.size() != V.ambient_dim())
    throw Error(ErrorCode::DimensionMismatch, "affine representative length");
  return AffineSolution{V.reject(point), V};
}

double affine_distance(const AffineSolution& s1, const AffineSolution& s2) {
  if (s1.ambient_dim() != s2.ambient_dim())
    throw Error(ErrorCode::DimensionMismatch, "ambient dimensions differ");
  if (s1.dim() != s2.dim())
    throw Error(ErrorCode::DimensionMismatch, "kernel dimensions differ");
  double anchor_gap = (s1.anchor - s2.anchor).norm();
  return std::max(anchor_gap, grassmann_distance(s1.kernel, s2.kernel));
}

double solution_distance(const DenseMatrix& A, const DenseVector& b,
                         const DenseMatrix& B, const DenseVector& d) {
  if (A.cols() != B.cols())
    throw Error(ErrorCode::DimensionMismatch, "solution spaces differ");
  if (A.rows() != b.size() || B.rows() != d.size())
    throw Error(ErrorCode::DimensionMismatch, "right-hand side lengths");
  require_finite(A, "solution_distance");
  require_finite(B, "solution_distance");

  SvdFactorization fa = svd(A);
  SvdFactorization fb = svd(B);
  const std::size_t ra = exact_rank(fa);
  const std::size_t rb = exact_rank(fb);
  if (ra != rb)
    throw Error(ErrorCode::RankMismatch,
                std::to_string(ra) + " vs " + std::to_string(rb));

  auto minnorm = [](const SvdFactorization& f, std::size_t r,
                    const DenseVector& rhs) {
    DenseVector x(f.source_cols());
    for (std::size_t l = 0; l < r; ++l) {
      Scalar coeff = inner(f.U.column(l), rhs) / f.sigma[l];
      const Scalar* v = f.V.col_data(l);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += v[i] * coeff;
    }
    return x;
  };

  DenseVector xa = minnorm(fa, ra, b);
  DenseVector xb = minnorm(fb, rb, d);

  auto check_consistent = [](const DenseMatrix& M, const DenseVector& rhs,
                             const DenseVector& x, double sigma1) {
    double residual = (M * x - rhs).norm();
    double scale = std::max({rhs.norm(), sigma1 * x.norm(), 1.0});
    if (residual > 1e-8 * scale)
      throw Error(ErrorCode::InconsistentSystem,
                  "residual " + std::to_string(residual));
  };
  check_consistent(A, b, xa, fa.sigma.empty() ? 0.0 : fa.sigma[0]);
  check_consistent(B, d, xb, fb.sigma.empty() ? 0.0 : fb.sigma[0]);

  Subspace ka = Subspace::from_orthonormal(fa.V.columns(ra, A.cols() - ra));
  Subspace kb = Subspace::from_orthonormal(fb.V.columns(rb, B.cols() - rb));
  return std::max((xa - xb).norm(), grassmann_distance(ka, kb));
}

std::pair<DenseVector, DenseVector> nearest_in_affine(
    const AffineSolution& S, const DenseVector& target) {
  if (target.size() != S.ambient_dim())
    throw Error(ErrorCode::DimensionMismatch, "target length");
  const DenseMatrix& B = S.kernel.basis();
  DenseVector coeffs(B.cols());
  DenseVector shifted = target - S.anchor;
  for (std::size_t j = 0; j < B.cols(); ++j)
    coeffs[j] = inner(B.column(j), shifted);
  DenseVector point = S.anchor;
  for (std::size_t j = 0; j < B.cols(); ++j) {
    const Scalar* col = B.col_data(j);
    for (std::size_t i = 0; i < point.size(); ++i)
      point[i] += col[i] * coeffs[j];
  }
  return {point, coeffs};
}

}  // namespace grasslin
