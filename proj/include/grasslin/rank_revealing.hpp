#pragma once

#include <optional>

#include "grasslin/factor.hpp"
#include "grasslin/grassmann.hpp"

namespace grasslin {

// theta within this relative band of a singular value is rejected as
// undefined; overridable per call (CLI: GRASSLIN_GUARD).
inline constexpr double kDefaultGuard = 1e-9;

// Singular values at or below rank_floor * sigma_1 count as zero for the
// exact (non-truncated) pseudoinverse and exact-rank decisions.
inline constexpr double kRankFloor = 1e-14;

struct RankDecision {
  double theta = 0.0;
  std::size_t rank = 0;
  std::optional<double> sigma_r;   // none when rank == 0
  double sigma_r_plus_1 = 0.0;     // 0 when rank == min(m, n)
  double guard = 0.0;              // min_j |theta - sigma_j| / sigma_1
};

// Rank-r truncation of an SVD, stored in factored form.
class ThetaProjection {
 public:
  ThetaProjection(const SvdFactorization& f, const RankDecision& decision);

  std::size_t source_rows() const { return rows_; }
  std::size_t source_cols() const { return cols_; }
  std::size_t rank() const { return decision_.rank; }
  const RankDecision& decision() const { return decision_; }

  const DenseMatrix& left_vectors() const { return U_r_; }     // m x r
  const std::vector<double>& retained_sigma() const { return sigma_; }
  const DenseMatrix& right_vectors() const { return V_r_; }    // n x r
  const DenseMatrix& kernel_basis() const { return kernel_; }  // n x (n - r)

  DenseMatrix materialize() const;          // U_r diag(sigma) V_r^H
  DenseVector apply(const DenseVector& x) const;
  DenseVector apply_pinv(const DenseVector& b) const;   // A_theta^dagger b
  DenseVector project_onto_range(const DenseVector& b) const;  // U_r U_r^H b

 private:
  std::size_t rows_;
  std::size_t cols_;
  RankDecision decision_;
  DenseMatrix U_r_;
  std::vector<double> sigma_;
  DenseMatrix V_r_;
  DenseMatrix kernel_;
};

RankDecision numerical_rank(const SvdFactorization& f, double theta,
                            double guard = kDefaultGuard);
RankDecision numerical_rank(const DenseMatrix& A, double theta,
                            double guard = kDefaultGuard);

ThetaProjection theta_projection(const SvdFactorization& f, double theta,
                                 double guard = kDefaultGuard);
ThetaProjection theta_projection(const DenseMatrix& A, double theta,
                                 double guard = kDefaultGuard);

Subspace numerical_kernel(const DenseMatrix& A, double theta,
                          double guard = kDefaultGuard);

// Exact rank count #{sigma_j > rank_floor * sigma_1}.
std::size_t exact_rank(const SvdFactorization& f, double floor = kRankFloor);

DenseMatrix pseudoinverse(const DenseMatrix& A);

DenseMatrix truncated_pseudoinverse(const ThetaProjection& P);

// sol_theta(A, 0) of the homogeneous system; identical to numerical_kernel.
Subspace homogeneous_solution(const DenseMatrix& A, double theta,
                              double guard = kDefaultGuard);

}  // namespace grasslin
