#include <doctest.h>

#include <cmath>

#include "grasslin/case_studies.hpp"
#include "grasslin/operator_lift.hpp"
#include "grasslin/random.hpp"

using namespace grasslin;

namespace {

DenseMatrix kron(const DenseMatrix& A, const DenseMatrix& B) {
  DenseMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (std::size_t aj = 0; aj < A.cols(); ++aj)
    for (std::size_t ai = 0; ai < A.rows(); ++ai)
      for (std::size_t bj = 0; bj < B.cols(); ++bj)
        for (std::size_t bi = 0; bi < B.rows(); ++bi)
          out(ai * B.rows() + bi, aj * B.cols() + bj) = A(ai, aj) * B(bi, bj);
  return out;
}

}  // namespace

TEST_CASE("pack orders coordinates column-major and by ascending degree") {
  Shape vec3{SpaceDescriptor::vector_space(3)};
  StructuredElement v = make_element(
      vec3, {DenseMatrix::from_real_rows({{1}, {2}, {3}})});
  DenseVector pv = pack(v);
  CHECK(pv[0].real() == 1.0);
  CHECK(pv[1].real() == 2.0);
  CHECK(pv[2].real() == 3.0);

  Shape mat22{SpaceDescriptor::matrix_space(2, 2)};
  StructuredElement m = make_element(
      mat22, {DenseMatrix::from_real_rows({{1, 3}, {2, 4}})});
  DenseVector pm = pack(m);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(pm[i].real() == doctest::Approx(static_cast<double>(i + 1)));

  Shape poly2{SpaceDescriptor::poly_space(2)};
  StructuredElement p = make_element(
      poly2, {DenseMatrix::from_real_rows({{4.6667}, {7.0}, {2.3333}})});
  DenseVector pp = pack(p);
  CHECK(pp[0].real() == doctest::Approx(4.6667));
  CHECK(pp[1].real() == doctest::Approx(7.0));
  CHECK(pp[2].real() == doctest::Approx(2.3333));
}

TEST_CASE("unpack inverts pack exactly") {
  Rng rng(501);
  Shape shape{SpaceDescriptor::matrix_space(3, 2), SpaceDescriptor::poly_space(4),
              SpaceDescriptor::vector_space(2)};
  for (int t = 0; t < 50; ++t) {
    DenseVector coords = rng.vector(total_dim(shape));
    StructuredElement e = unpack(coords, shape);
    DenseVector back = pack(e);
    for (std::size_t i = 0; i < coords.size(); ++i) CHECK(back[i] == coords[i]);
  }

  CHECK_THROWS_AS(unpack(DenseVector(5), shape), Error);
  try {
    unpack(DenseVector(5), shape);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }
}

TEST_CASE("conformance violations are flagged") {
  Shape shape{SpaceDescriptor::vector_space(3)};
  CHECK_THROWS_AS(make_element(shape, {DenseMatrix::zero(2, 1)}), Error);
  CHECK_THROWS_AS(make_element(shape, {}), Error);
}

TEST_CASE("materializing the identity gives the identity") {
  Shape shape{SpaceDescriptor::vector_space(3)};
  LinearOperator id{shape, shape, [](const StructuredElement& e) { return e; }};
  Materialization m = materialize(id);
  CHECK(spectral_norm(m.matrix - DenseMatrix::identity(3)) <= 1e-14);
}

TEST_CASE("two-sided matrix multiplication matches its Kronecker form") {
  Rng rng(503);
  DenseMatrix A = rng.matrix(2, 2);
  DenseMatrix B = rng.matrix(2, 2);
  Shape shape{SpaceDescriptor::matrix_space(2, 2)};
  LinearOperator op{shape, shape, [&, shape](const StructuredElement& e) {
                      return make_element(shape,
                                          {A * e.parts[0] + e.parts[0] * B});
                    }};
  DenseMatrix M = materialize(op).matrix;
  DenseMatrix expected = kron(DenseMatrix::identity(2), A) +
                         kron(B.hermitian().hermitian(), DenseMatrix::identity(2));
  // vec(AX + XB) = (I (x) A + B^T (x) I) vec(X); build B^T explicitly
  DenseMatrix Bt(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) Bt(i, j) = B(j, i);
  expected = kron(DenseMatrix::identity(2), A) + kron(Bt, DenseMatrix::identity(2));
  CHECK(spectral_norm(M - expected) <= 1e-12 * std::max(1.0, spectral_norm(expected)));
}

TEST_CASE("nonlinear closures are rejected") {
  Shape shape{SpaceDescriptor::vector_space(2)};
  LinearOperator affine{shape, shape, [shape](const StructuredElement& e) {
                          DenseMatrix shifted = e.parts[0];
                          shifted(0, 0) += Scalar(1.0, 0.0);
                          return make_element(shape, {shifted});
                        }};
  CHECK_THROWS_AS(materialize(affine), Error);

  LinearOperator quadratic{shape, shape, [shape](const StructuredElement& e) {
                             DenseMatrix sq = e.parts[0];
                             sq(0, 0) *= sq(0, 0);
                             return make_element(shape, {sq});
                           }};
  try {
    materialize(quadratic);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonlinearOperator);
  }
}

TEST_CASE("materialization is deterministic") {
  CaseStudy cs = sylvester_case(0.6666);
  DenseMatrix m1 = materialize(*cs.op).matrix;
  DenseMatrix m2 = materialize(*cs.op).matrix;
  for (std::size_t j = 0; j < m1.cols(); ++j)
    for (std::size_t i = 0; i < m1.rows(); ++i) CHECK(m1(i, j) == m2(i, j));
}

TEST_CASE("operator solve matches the matrix solve exactly") {
  Shape shape{SpaceDescriptor::vector_space(3)};
  LinearOperator id{shape, shape, [](const StructuredElement& e) { return e; }};
  StructuredElement rhs = unpack(DenseVector::from_real({1, 2, 3}), shape);
  OperatorSolution sol = solve_operator(id, rhs, SolverConfig{0.5});
  REQUIRE(!sol.is_empty());
  CHECK(sol.kernel_basis.empty());
  CHECK((pack(*sol.anchor) - pack(rhs)).norm() <= 1e-14);

  CaseStudy cs = sylvester_case(0.6666);
  OperatorSolution op_sol = solve_operator(*cs.op, *cs.op_rhs, SolverConfig{cs.theta});
  GeneralSolution mat_sol = solve_general(cs.A, cs.b, SolverConfig{cs.theta});
  REQUIRE(!op_sol.is_empty());
  REQUIRE(!mat_sol.is_empty());
  CHECK(op_sol.report.rank == mat_sol.report.rank);
  CHECK(op_sol.report.sensitivity == mat_sol.report.sensitivity);
  CHECK(op_sol.report.residual == mat_sol.report.residual);
  DenseVector packed_anchor = pack(*op_sol.anchor);
  for (std::size_t i = 0; i < packed_anchor.size(); ++i)
    CHECK(packed_anchor[i] == mat_sol.affine->anchor[i]);
  REQUIRE(op_sol.kernel_basis.size() == 2);
}

TEST_CASE("rhs shape mismatches are rejected") {
  Shape shape{SpaceDescriptor::vector_space(3)};
  LinearOperator id{shape, shape, [](const StructuredElement& e) { return e; }};
  Shape wrong{SpaceDescriptor::vector_space(4)};
  StructuredElement rhs = unpack(DenseVector(4), wrong);
  CHECK_THROWS_AS(solve_operator(id, rhs, SolverConfig{0.5}), Error);
}
