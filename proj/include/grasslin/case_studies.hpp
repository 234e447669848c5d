#pragma once

#include <map>
#include <string>

#include "grasslin/operator_lift.hpp"

namespace grasslin {

// A worked system with its recommended tolerance and reference data for
// regression tests and demos. Reference vectors/matrices are keyed by role.
struct CaseStudy {
  std::string name;
  DenseMatrix A;
  DenseVector b;
  double theta = 0.0;
  std::optional<LinearOperator> op;
  std::optional<StructuredElement> op_rhs;
  std::map<std::string, DenseVector> vectors;
  std::map<std::string, DenseMatrix> matrices;
  bool quadrature_underflow = false;
};

// Parameter-dependent Sylvester equation A X + X B(t) = C; singular but
// consistent at t = 2/3 with a two-dimensional solution set.
CaseStudy sylvester_case(double t);

// 9x9 polynomial-combination system for three cofactors against a known
// greatest common divisor; rank deficient by 2 at theta = 5e-4.
CaseStudy bezout_case();

// Ill-conditioned 9x9 bidiagonal division system with a single-precision
// right-hand side; kappa ~ 1e9 yet sensitivity ~ 1.21 after projection.
CaseStudy division_case();

// Output-regulation system over C^{3x2} x C^{1x2}; rank deficient by one.
CaseStudy regulator_case();

// Hard-coded 6x6 multiplicity matrix with a three-dimensional numerical
// kernel at theta = 2e-4.
CaseStudy macaulay_fixture();

// First-kind Volterra discretization with an annihilator at the right
// endpoint; linear-spline collocation with composite-Simpson entries.
CaseStudy volterra_case(double kappa, std::size_t n);

// Polynomial product helper shared by the case builders (ascending
// coefficients, exact convolution).
DenseMatrix poly_multiply(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace grasslin
