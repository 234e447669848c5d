#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grasslin/dense.hpp"
#include "grasslin/random.hpp"
#include "grasslin/rank_revealing.hpp"

namespace grasslin {

// Data pair (A, b) with its perturbation and the rank in force. Missing b/db
// are treated as zero where a formula needs them.
struct BoundInput {
  DenseMatrix A;
  DenseMatrix dA;
  std::optional<DenseVector> b;
  std::optional<DenseVector> db;
  std::size_t r = 0;
  std::optional<double> theta;
};

struct HypothesisCheck {
  std::string condition;
  bool satisfied;
};

// A closed-form bound evaluation: the value is present iff every stated
// hypothesis holds; first_order marks bounds with an untracked O(||.||^2)
// term.
struct BoundValue {
  std::optional<double> value;
  bool hypotheses_met = false;
  std::vector<HypothesisCheck> hypothesis_report;
  bool first_order = false;

  bool applicable() const { return value.has_value(); }
};

// Kernel deviation under arbitrary perturbations (Wedin).
BoundValue wedin_kernel_bound(const BoundInput& in);

// Kernel deviation when the exact rank is preserved.
BoundValue rank_preserving_kernel_bound(const BoundInput& in);

// Solution-set deviation under rank- and consistency-preserving
// perturbations of a consistent system.
BoundValue consistent_solution_bound(const BoundInput& in);

// Relative error of the minimum-norm solution of a full-row-rank
// underdetermined system (first order).
BoundValue underdetermined_minnorm_bound(const BoundInput& in);

// Forward error for the homogeneous numerical solution.
BoundValue homogeneous_forward_bound(const BoundInput& in);

// Admissible open interval for the error tolerance given a data-error
// bound; with a right-hand side the lower end is scaled by
// omega = sqrt(4 ||A^+||^2 ||b||^2 + 2).
struct ToleranceWindow {
  double mu;
  double eta;
};
ToleranceWindow tolerance_window(const DenseMatrix& A, double dA_norm,
                                 const std::optional<DenseVector>& b = {});

// Forward error of the general numerical solution of a consistent system.
BoundValue general_forward_bound(const BoundInput& in);

// Error of a backward-accurate particular solution against the nearest
// exact solution, with the normalized homogeneous-case variants.
struct ParticularSolutionBound {
  BoundValue bound;
  std::optional<double> unit_homogeneous;    // normalized x, zero rhs
  std::optional<double> inverse_iteration;   // nonzero rhs, large solution
};
ParticularSolutionBound particular_solution_bound(const BoundInput& in,
                                                  double xtilde_norm);

// Kernel-orthogonal component of the difference of two backward-accurate
// particular solutions.
struct DifferenceInput {
  DenseMatrix A;
  DenseVector b;
  DenseMatrix A1;
  DenseVector b1;
  DenseVector x1;
  DenseMatrix A2;
  DenseVector b2;
  DenseVector x2;
  std::size_t r = 0;
};
BoundValue difference_in_kernel_bound(const DifferenceInput& in);

// Containment of the underlying solution in the general numerical solution
// of an ill-conditioned system.
BoundValue illcond_containment_bound(const BoundInput& in);

// Deviation of the truncated-SVD minimum-norm solution; exact-rank variant
// when rank(A) = r and b lies in Range(A).
BoundValue tsvd_perturbation_bound(const BoundInput& in);

// Closed-form norms of the stacked matrix [mu N^H; A].
struct StackedNorms {
  double norm;
  double pinv_norm;
};
StackedNorms stacked_operator_norms(const DenseMatrix& A, double theta,
                                    double mu, double guard = kDefaultGuard);

// First-order bracket for the condition number of the theta-projection of
// perturbed data.
struct ConditionBracket {
  double lo;
  double hi;
};
ConditionBracket condition_bracket(const DenseMatrix& A, double dA_norm,
                                   double theta);

// Lipschitz factor of the general numerical solution at (A, b, theta):
// a diagnostic, not a guaranteed constant (its smallness radius is not
// computable).
double lipschitz_diagnostic(const DenseMatrix& A, const DenseVector& b,
                            double theta, double guard = kDefaultGuard);

// A nearby matrix built by jittering the SVD factors, so the exact rank is
// preserved by construction; scale controls the distance roughly.
DenseMatrix rank_preserving_neighbor(Rng& rng, const SvdFactorization& f,
                                         std::size_t r, double scale);

}  // namespace grasslin
