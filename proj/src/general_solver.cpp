#include "grasslin/general_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace grasslin {

namespace {

double column_residual_max(const DenseMatrix& A, const DenseMatrix& B) {
  double worst = 0.0;
  for (std::size_t j = 0; j < B.cols(); ++j)
    worst = std::max(worst, (A * B.column(j)).norm());
  return worst;
}

}  // namespace

const char* branch_name(SolveBranch branch) {
  return branch == SolveBranch::HighRank ? "high-rank" : "truncated-svd";
}

GeneralSolution solve_general(const DenseMatrix& A, const DenseVector& b,
                              const SolverConfig& cfg) {
  if (A.rows() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "rows(A) != len(b)");
  require_finite(A, "solve_general");
  require_finite(b, "solve_general");

  SvdFactorization f = svd(A);
  ThetaProjection P(f, numerical_rank(f, cfg.theta, cfg.guard));
  const std::size_t n = A.cols();
  const std::size_t r = P.rank();

  DenseVector b_theta = P.project_onto_range(b);
  const double backward =
      std::hypot(P.decision().sigma_r_plus_1, (b - b_theta).norm());

  // Backward error equal to theta leaves the solution undefined; ties are
  // resolved with the same relative guard as the rank decision.
  if (std::fabs(backward - cfg.theta) <=
      cfg.guard * std::max(backward, cfg.theta))
    throw Error(ErrorCode::BackwardErrorOnTheta,
                "backward error " + std::to_string(backward) +
                    " indistinguishable from theta");

  Subspace kernel = Subspace::from_orthonormal(P.kernel_basis());

  const std::size_t threshold = cfg.branch_threshold.value_or((n + 9) / 10);
  SolveBranch branch = (r > 0 && n - r <= threshold) ? SolveBranch::HighRank
                                                     : SolveBranch::TruncatedSvd;
  DenseVector anchor;
  if (branch == SolveBranch::HighRank) {
    DenseVector particular =
        cfg.tikhonov_alpha
            ? tikhonov_solve(A, b, *cfg.tikhonov_alpha)
            : kernel_constrained_solve(
                  A, b, kernel, cfg.mu.value_or(P.retained_sigma().back()));
    anchor = kernel.reject(particular);
  } else {
    anchor = P.apply_pinv(b);
  }

  SolveReport report;
  report.theta = cfg.theta;
  report.rank = r;
  report.sensitivity =
      r > 0 ? P.retained_sigma().front() / P.retained_sigma().back() : 1.0;
  report.backward_error = backward;
  report.residual =
      std::max((A * anchor - b).norm(), column_residual_max(A, kernel.basis()));
  report.branch = branch;

  GeneralSolution solution;
  solution.report = report;
  solution.ambient_dim = n;
  if (backward < cfg.theta)
    solution.affine = AffineSolution{std::move(anchor), std::move(kernel)};
  return solution;
}

DenseVector truncated_svd_solution(const DenseMatrix& A, const DenseVector& b,
                                   double theta, double guard) {
  if (A.rows() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "rows(A) != len(b)");
  require_finite(A, "truncated_svd_solution");
  require_finite(b, "truncated_svd_solution");
  return theta_projection(A, theta, guard).apply_pinv(b);
}

DenseVector tikhonov_solve(const DenseMatrix& A, const DenseVector& b,
                           double alpha) {
  if (A.rows() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "rows(A) != len(b)");
  if (!(alpha > 0.0))
    throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  require_finite(A, "tikhonov_solve");
  require_finite(b, "tikhonov_solve");

  const std::size_t m = A.rows();
  const std::size_t n = A.cols();
  DenseMatrix stacked(m + n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const Scalar* src = A.col_data(j);
    Scalar* dst = stacked.col_data(j);
    std::copy(src, src + m, dst);
    dst[m + j] = Scalar(alpha, 0.0);
  }
  DenseVector rhs(m + n);
  for (std::size_t i = 0; i < m; ++i) rhs[i] = b[i];

  auto x = detail::least_squares_qr(stacked, rhs);
  if (!x)
    throw Error(ErrorCode::NonFinite, "augmented Tikhonov system degenerate");
  return *x;
}

DenseVector kernel_constrained_solve(const DenseMatrix& A, const DenseVector& b,
                                     const Subspace& N, double mu) {
  if (A.rows() != b.size() || N.ambient_dim() != A.cols())
    throw Error(ErrorCode::DimensionMismatch, "kernel_constrained_solve");
  if (!(mu > 0.0))
    throw Error(ErrorCode::InvalidArgument, "mu must be positive");
  require_finite(A, "kernel_constrained_solve");
  require_finite(b, "kernel_constrained_solve");

  const std::size_t m = A.rows();
  const std::size_t n = A.cols();
  const std::size_t k = N.dim();
  DenseMatrix stacked(k + m, n);
  for (std::size_t j = 0; j < n; ++j) {
    Scalar* dst = stacked.col_data(j);
    for (std::size_t i = 0; i < k; ++i)
      dst[i] = mu * std::conj(N.basis()(j, i));
    const Scalar* src = A.col_data(j);
    std::copy(src, src + m, dst + k);
  }
  DenseVector rhs(k + m);
  for (std::size_t i = 0; i < m; ++i) rhs[k + i] = b[i];

  auto x = detail::least_squares_qr(stacked, rhs);
  if (!x)
    throw Error(ErrorCode::SingularAugmentedSystem,
                "kernel basis does not complete the rank");
  return *x;
}

double sensitivity(const ThetaProjection& P) {
  if (P.rank() == 0)
    throw Error(ErrorCode::ZeroRank, "sensitivity of a rank-0 projection");
  return P.retained_sigma().front() / P.retained_sigma().back();
}

double classic_condition(const DenseMatrix& A) {
  require_finite(A, "classic_condition");
  SvdFactorization f = svd(A);
  const double sigma1 = f.sigma.empty() ? 0.0 : f.sigma.front();
  const double sigma_min = f.sigma.empty() ? 0.0 : f.sigma.back();
  if (sigma_min > kRankFloor * sigma1 && sigma_min > 0.0)
    return sigma1 / sigma_min;
  return std::numeric_limits<double>::infinity();
}

double backward_error(const DenseMatrix& A, const DenseVector& b, double theta,
                      double guard) {
  if (A.rows() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "rows(A) != len(b)");
  require_finite(A, "backward_error");
  require_finite(b, "backward_error");
  ThetaProjection P = theta_projection(A, theta, guard);
  DenseVector b_theta = P.project_onto_range(b);
  return std::hypot(P.decision().sigma_r_plus_1, (b - b_theta).norm());
}

double affine_distance(const GeneralSolution& s1, const GeneralSolution& s2) {
  if (s1.is_empty() && s2.is_empty()) return 0.0;
  if (s1.is_empty() != s2.is_empty())
    throw Error(ErrorCode::IncomparableDimensions,
                "empty set against a nonempty solution");
  return affine_distance(*s1.affine, *s2.affine);
}

}  // namespace grasslin
