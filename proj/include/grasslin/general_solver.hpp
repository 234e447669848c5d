#pragma once

#include <optional>

#include "grasslin/grassmann.hpp"
#include "grasslin/rank_revealing.hpp"

namespace grasslin {

enum class SolveBranch { HighRank, TruncatedSvd };

const char* branch_name(SolveBranch branch);

struct SolveReport {
  double theta = 0.0;
  std::size_t rank = 0;
  double sensitivity = 1.0;     // sigma_1 / sigma_r of the retained spectrum
  double backward_error = 0.0;  // ||(A, b) - (A_theta, b_theta)|| (pair norm)
  double residual = 0.0;        // max{||A x - b||, columnwise max ||A B_j||}
  SolveBranch branch = SolveBranch::TruncatedSvd;
};

struct SolverConfig {
  SolverConfig() = default;
  SolverConfig(double theta_value) : theta(theta_value) {}

  double theta = 0.0;
  std::optional<double> mu;                    // default sigma_r(A_theta)
  std::optional<std::size_t> branch_threshold; // default ceil(n / 10)
  std::optional<double> tikhonov_alpha;        // alternate particular solver
  double guard = kDefaultGuard;
};

// Either the empty set (dimension -1) or an affine subspace, plus the report.
struct GeneralSolution {
  std::optional<AffineSolution> affine;
  SolveReport report;
  std::size_t ambient_dim = 0;

  bool is_empty() const { return !affine.has_value(); }
  long long dimension() const {
    return affine ? static_cast<long long>(affine->dim()) : -1;
  }
};

// sol_theta(A, b): the solution set of A_theta x = b_theta when its backward
// error is strictly below theta, the empty set when strictly above; ties
// within the guard band raise BackwardErrorOnTheta.
GeneralSolution solve_general(const DenseMatrix& A, const DenseVector& b,
                              const SolverConfig& cfg);

DenseVector truncated_svd_solution(const DenseMatrix& A, const DenseVector& b,
                                   double theta, double guard = kDefaultGuard);

// Minimizer of ||A x - b||^2 + alpha^2 ||x||^2 via the augmented system.
DenseVector tikhonov_solve(const DenseMatrix& A, const DenseVector& b,
                           double alpha);

// Least-squares solution of the stacked system [mu N^H; A] x = [0; b].
DenseVector kernel_constrained_solve(const DenseMatrix& A, const DenseVector& b,
                                     const Subspace& N, double mu);

double sensitivity(const ThetaProjection& P);

// sigma_1 / sigma_min when the smallest singular value clears the rank
// floor; +infinity otherwise.
double classic_condition(const DenseMatrix& A);

double backward_error(const DenseMatrix& A, const DenseVector& b, double theta,
                      double guard = kDefaultGuard);

// Empty/empty compares as 0; empty against nonempty is an error.
double affine_distance(const GeneralSolution& s1, const GeneralSolution& s2);

}  // namespace grasslin
