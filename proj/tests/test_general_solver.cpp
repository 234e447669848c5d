#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "grasslin/general_solver.hpp"
#include "grasslin/perturbation_bounds.hpp"

using namespace grasslin;

namespace {

SolverConfig config(double theta) {
  SolverConfig cfg;
  cfg.theta = theta;
  return cfg;
}

DenseMatrix exact_rank_matrix(Rng& rng, std::size_t m, std::size_t n,
                              std::size_t r) {
  std::vector<double> sigma(std::min(m, n), 0.0);
  for (std::size_t i = 0; i < r; ++i) sigma[i] = rng.uniform(0.5, 2.0);
  std::sort(sigma.begin(), sigma.begin() + r, std::greater<double>());
  return matrix_with_spectrum(rng, m, n, sigma);
}

AffineSolution exact_solution_set(const DenseMatrix& A, const DenseVector& b) {
  SvdFactorization f = svd(A);
  std::size_t r = exact_rank(f);
  DenseVector x(A.cols());
  for (std::size_t l = 0; l < r; ++l) {
    Scalar coeff = inner(f.U.column(l), b) / f.sigma[l];
    const Scalar* v = f.V.col_data(l);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += v[i] * coeff;
  }
  return AffineSolution{
      x, Subspace::from_orthonormal(f.V.columns(r, A.cols() - r))};
}

}  // namespace

TEST_CASE("exact systems solve exactly") {
  DenseVector b = DenseVector::from_real({1, -2, 3});
  GeneralSolution sol = solve_general(DenseMatrix::identity(3), b, config(0.5));
  REQUIRE(!sol.is_empty());
  CHECK(sol.dimension() == 0);
  CHECK((sol.affine->anchor - b).norm() <= 1e-14);
  CHECK(sol.report.backward_error <= 1e-14);
  CHECK(sol.report.rank == 3);
  CHECK(sol.report.sensitivity == doctest::Approx(1.0));
}

TEST_CASE("pure-residual systems are empty") {
  DenseMatrix A = DenseMatrix::diagonal({1.0, 0.0});
  DenseVector b = DenseVector::from_real({0, 1});
  GeneralSolution sol = solve_general(A, b, config(0.5));
  CHECK(sol.is_empty());
  CHECK(sol.dimension() == -1);
  CHECK(sol.report.backward_error == doctest::Approx(1.0));
}

TEST_CASE("backward error equal to theta is rejected") {
  DenseMatrix A = DenseMatrix::diagonal({2.0, 0.0});
  DenseVector b = DenseVector::from_real({0, 1});
  CHECK(backward_error(A, b, 0.5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(solve_general(A, b, config(1.0)), Error);
  try {
    solve_general(A, b, config(1.0));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BackwardErrorOnTheta);
  }
}

TEST_CASE("definition trichotomy on random inputs") {
  Rng rng(101);
  std::size_t affine_count = 0, empty_count = 0, rejected = 0;
  for (int t = 0; t < 200; ++t) {
    std::size_t m = 3 + rng.index(6);
    std::size_t n = 3 + rng.index(6);
    DenseMatrix A = rng.matrix(m, n);
    DenseVector b = rng.vector(m);
    double theta = rng.uniform(1e-3, 2.0 * spectral_norm(A));
    try {
      GeneralSolution sol = solve_general(A, b, config(theta));
      if (sol.is_empty()) {
        CHECK(sol.report.backward_error > theta);
        ++empty_count;
      } else {
        CHECK(sol.report.backward_error < theta);
        CHECK(sol.affine->kernel.project(sol.affine->anchor).norm() <=
              1e-10 * std::max(sol.affine->anchor.norm(), 1.0));
        ++affine_count;
      }
    } catch (const Error& e) {
      bool guard_error = e.code() == ErrorCode::ThetaOnSingularValue ||
                         e.code() == ErrorCode::BackwardErrorOnTheta;
      CHECK(guard_error);
      ++rejected;
    }
  }
  CHECK(affine_count > 0);
  CHECK(empty_count > 0);
  (void)rejected;
}

TEST_CASE("solve recovers the exact solution set of an exact-rank system") {
  Rng rng(103);
  for (int t = 0; t < 40; ++t) {
    std::size_t n = 4 + rng.index(6);
    std::size_t r = 1 + rng.index(n - 1);
    DenseMatrix A = exact_rank_matrix(rng, n + rng.index(3), n, r);
    DenseVector b = A * rng.vector(n);
    SvdFactorization f = svd(A);
    double theta = rng.uniform(0.1, 0.9) * f.sigma[r - 1];

    GeneralSolution sol = solve_general(A, b, config(theta));
    REQUIRE(!sol.is_empty());
    CHECK(affine_distance(*sol.affine, exact_solution_set(A, b)) <= 1e-8);
  }
}

TEST_CASE("empty solutions stay empty under small perturbations") {
  Rng rng(107);
  for (int t = 0; t < 30; ++t) {
    std::size_t n = 4 + rng.index(4);
    std::size_t r = 1 + rng.index(n - 1);
    DenseMatrix A = exact_rank_matrix(rng, n + 1, n, r);
    SvdFactorization f = svd(A);
    // force a right-hand side with a range-orthogonal component
    DenseVector b = A * rng.vector(n) + 0.5 * f.U.column(n);
    double perp = (b - theta_projection(f, 0.5 * f.sigma[r - 1])
                           .project_onto_range(b))
                      .norm();
    double theta = 0.4 * std::min(0.5 * f.sigma[r - 1], perp);
    GeneralSolution base = solve_general(A, b, config(theta));
    REQUIRE(base.is_empty());

    double rho = 0.05 * theta;
    for (int k = 0; k < 5; ++k) {
      DenseMatrix dA = rng.matrix(n + 1, n);
      dA *= Scalar(rho / (2.0 * spectral_norm(dA)), 0.0);
      DenseVector db = rng.vector(n + 1);
      db *= Scalar(rho / (2.0 * db.norm()), 0.0);
      GeneralSolution moved = solve_general(A + dA, b + db, config(theta));
      CHECK(moved.is_empty());
    }
  }
}

TEST_CASE("high-rank and truncated-svd branches agree") {
  Rng rng(109);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = 4 + rng.index(8);
    std::size_t r = 1 + rng.index(n - 1);
    DenseMatrix A = exact_rank_matrix(rng, n + rng.index(3), n, r);
    DenseVector noise = rng.vector(A.rows());
    DenseVector b = A * rng.vector(n) + 1e-9 * noise;
    SvdFactorization f = svd(A);
    double theta = 0.5 * f.sigma[r - 1];

    SolverConfig high = config(theta);
    high.branch_threshold = n;  // force the kernel-constrained path
    SolverConfig trunc = config(theta);
    trunc.branch_threshold = 0;  // force the truncated-SVD path

    GeneralSolution s1 = solve_general(A, b, high);
    GeneralSolution s2 = solve_general(A, b, trunc);
    REQUIRE(!s1.is_empty());
    REQUIRE(!s2.is_empty());
    CHECK(s1.report.branch == SolveBranch::HighRank);
    CHECK(s2.report.branch == SolveBranch::TruncatedSvd);
    double scale = 1.0 + s2.affine->anchor.norm();
    CHECK(affine_distance(*s1.affine, *s2.affine) <= 1e-8 * scale);
  }
}

TEST_CASE("tikhonov-backed particular solutions canonicalize identically") {
  Rng rng(211);
  DenseMatrix A = exact_rank_matrix(rng, 6, 6, 4);
  DenseVector b = A * rng.vector(6);
  SolverConfig cfg = config(0.5 * svd(A).sigma[3]);
  cfg.branch_threshold = 6;
  cfg.tikhonov_alpha = 1e-7;
  GeneralSolution viaTikhonov = solve_general(A, b, cfg);
  GeneralSolution direct = solve_general(A, b, config(cfg.theta));
  REQUIRE(!viaTikhonov.is_empty());
  CHECK(affine_distance(*viaTikhonov.affine, *direct.affine) <=
        1e-6 * (1.0 + direct.affine->anchor.norm()));
}

TEST_CASE("positive scaling leaves the solution set fixed") {
  Rng rng(113);
  DenseMatrix A = exact_rank_matrix(rng, 6, 5, 3);
  DenseVector b = A * rng.vector(5);
  double theta = 0.5 * svd(A).sigma[2];
  GeneralSolution base = solve_general(A, b, config(theta));
  REQUIRE(!base.is_empty());
  for (double c : {0.01, 7.0, 250.0}) {
    GeneralSolution scaled = solve_general(Scalar(c, 0.0) * A,
                                           Scalar(c, 0.0) * b, config(c * theta));
    REQUIRE(!scaled.is_empty());
    CHECK(affine_distance(*base.affine, *scaled.affine) <= 1e-10);
    CHECK(scaled.report.sensitivity ==
          doctest::Approx(base.report.sensitivity).epsilon(1e-12));
  }
}

TEST_CASE("truncated svd solution") {
  DenseVector b = DenseVector::from_real({2, -1, 5});
  CHECK((truncated_svd_solution(DenseMatrix::identity(3), b, 0.5) - b).norm() <=
        1e-14);

  DenseMatrix A = DenseMatrix::diagonal({2.0, 1e-9});
  DenseVector rhs = DenseVector::from_real({2, 0});
  DenseVector x = truncated_svd_solution(A, rhs, 1e-4);
  CHECK(x[0].real() == doctest::Approx(1.0));
  CHECK(std::abs(x[1]) <= 1e-14);

  // orthogonal to the numerical kernel
  Subspace kernel = numerical_kernel(A, 1e-4);
  CHECK(kernel.project(x).norm() <= 1e-10);
}

TEST_CASE("tikhonov regularization") {
  DenseVector b = DenseVector::from_real({1, 2, 3});
  DenseVector x = tikhonov_solve(DenseMatrix::identity(3), b, 1e-8);
  CHECK((x - b).norm() <= 1e-7);

  DenseMatrix one = DenseMatrix::from_real_rows({{1}});
  DenseVector rhs = DenseVector::from_real({1});
  CHECK(tikhonov_solve(one, rhs, 1.0)[0].real() == doctest::Approx(0.5));

  CHECK_THROWS_AS(tikhonov_solve(one, rhs, 0.0), Error);

  // minimizer property: perturbing the solution only increases the objective
  Rng rng(307);
  DenseMatrix A = rng.matrix(6, 4);
  DenseVector c = rng.vector(6);
  double alpha = 0.37;
  DenseVector xt = tikhonov_solve(A, c, alpha);
  auto objective = [&](const DenseVector& y) {
    double r = (A * y - c).norm();
    double n = y.norm();
    return r * r + alpha * alpha * n * n;
  };
  double at_min = objective(xt);
  for (int k = 0; k < 20; ++k) {
    DenseVector y = xt + 1e-3 * rng.vector(4);
    CHECK(objective(y) >= at_min - 1e-12);
  }
}

TEST_CASE("kernel constrained solve") {
  Rng rng(311);
  DenseMatrix A = rng.matrix(5, 5);
  DenseVector b = rng.vector(5);
  DenseVector direct = *detail::least_squares_qr(A, b);
  DenseVector via = kernel_constrained_solve(A, b, Subspace::trivial(5), 1.0);
  CHECK((direct - via).norm() <= 1e-10 * std::max(1.0, direct.norm()));

  DenseMatrix D = DenseMatrix::diagonal({1.0, 0.0});
  Subspace N = Subspace::from_orthonormal(
      DenseMatrix::from_real_rows({{0}, {1}}));
  DenseVector x = kernel_constrained_solve(D, DenseVector::from_real({3, 0}), N, 1.0);
  CHECK(x[0].real() == doctest::Approx(3.0));
  CHECK(std::abs(x[1]) <= 1e-14);

  // a kernel basis that fails to complete the rank is flagged
  Subspace wrong = Subspace::from_orthonormal(
      DenseMatrix::from_real_rows({{1}, {0}}));
  CHECK_THROWS_AS(
      kernel_constrained_solve(D, DenseVector::from_real({3, 0}), wrong, 1.0),
      Error);
  try {
    kernel_constrained_solve(D, DenseVector::from_real({3, 0}), wrong, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularAugmentedSystem);
  }
}

TEST_CASE("kernel-constrained solutions project to the truncated solution") {
  // After removing the kernel component the stacked solve reproduces the
  // minimum-norm solution of the projected system.
  Rng rng(313);
  for (int t = 0; t < 30; ++t) {
    std::size_t n = 4 + rng.index(6);
    std::size_t r = 1 + rng.index(n - 1);
    DenseMatrix A = exact_rank_matrix(rng, n + rng.index(2), n, r);
    DenseVector b = rng.vector(A.rows());
    SvdFactorization f = svd(A);
    double theta = 0.5 * f.sigma[r - 1];
    ThetaProjection P = theta_projection(f, theta);
    Subspace N = Subspace::from_orthonormal(P.kernel_basis());
    double mu = P.retained_sigma().back();

    DenseVector raw = kernel_constrained_solve(A, b, N, mu);
    DenseVector canonical = N.reject(raw);
    DenseVector truncated = P.apply_pinv(b);
    CHECK((canonical - truncated).norm() <=
          1e-8 * std::max(1.0, truncated.norm()));
  }
}

TEST_CASE("sensitivity and classic condition") {
  ThetaProjection P = theta_projection(DenseMatrix::identity(4), 0.5);
  CHECK(sensitivity(P) == doctest::Approx(1.0));

  ThetaProjection zero = theta_projection(DenseMatrix::zero(3, 3), 0.5);
  CHECK_THROWS_AS(sensitivity(zero), Error);

  CHECK(classic_condition(DenseMatrix::identity(3)) == doctest::Approx(1.0));
  CHECK(std::isinf(classic_condition(DenseMatrix::diagonal({1.0, 0.0}))));
}

TEST_CASE("backward error ceiling for consistent systems plus noise") {
  // For consistent singular systems plus noise of norm delta, the backward
  // error never exceeds omega * delta with omega = sqrt(4 |b|^2/sigma_r^2 + 2).
  Rng rng(317);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 4 + rng.index(5);
    std::size_t r = 1 + rng.index(n - 1);
    DenseMatrix A = exact_rank_matrix(rng, n + rng.index(2), n, r);
    DenseVector b = A * rng.vector(n);
    SvdFactorization f = svd(A);
    double sigma_r = f.sigma[r - 1];
    double omega = std::sqrt(4.0 * b.norm() * b.norm() / (sigma_r * sigma_r) + 2.0);

    double cap = sigma_r / (omega + 1.0);
    double delta = rng.uniform(0.05, 0.9) * cap;
    DenseMatrix dA = rng.matrix(A.rows(), n);
    dA *= Scalar(delta * 0.7 / spectral_norm(dA), 0.0);
    DenseVector db = rng.vector(A.rows());
    db *= Scalar(delta * 0.7 / db.norm(), 0.0);
    double pair = pair_norm(dA, db);

    double theta = omega * pair + 0.5 * (sigma_r - pair - omega * pair);
    double measured;
    try {
      measured = backward_error(A + dA, b + db, theta);
    } catch (const Error&) {
      continue;
    }
    CHECK(measured <= omega * pair * (1.0 + 1e-9));
  }
}

TEST_CASE("backward accurate vectors approximate an exact solution") {
  // Every exact solution of a nearby system lands close to the solution set
  // of the singular one, with the gap controlled by the particular-solution
  // bound evaluator.
  Rng rng(331);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = 4 + rng.index(6);
    std::size_t r = 1 + rng.index(n - 1);
    DenseMatrix A = exact_rank_matrix(rng, n, n, r);
    DenseVector b = A * rng.vector(n);
    if (b.norm() < 0.05) continue;
    SvdFactorization f = svd(A);

    DenseMatrix dA = rng.matrix(n, n);
    dA *= Scalar(rng.uniform(0.05, 1.0) * 0.4 * f.sigma[r - 1] /
                     spectral_norm(dA),
                 0.0);
    DenseVector db = rng.vector(n);
    db *= Scalar(rng.uniform(0.0, 0.01) * b.norm() / db.norm(), 0.0);
    auto xt = detail::least_squares_qr(A + dA, b + db);
    if (!xt) continue;

    BoundInput in{A, dA, b, db, r, std::nullopt};
    ParticularSolutionBound bound = particular_solution_bound(in, xt->norm());
    if (!bound.bound.applicable()) continue;

    AffineSolution exact = exact_solution_set(A, b);
    DenseVector nearest = exact.anchor + exact.kernel.project(*xt);
    if (nearest.norm() < 1e-6) continue;
    CHECK((*xt - nearest).norm() / nearest.norm() <=
          *bound.bound.value * (1.0 + 1e-9));
  }
}

TEST_CASE("differences of particular solutions live in the kernel") {
  Rng rng(337);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = 4 + rng.index(6);
    std::size_t r = 1 + rng.index(n - 1);
    DenseMatrix A = exact_rank_matrix(rng, n, n, r);
    DenseVector b = A * rng.vector(n);
    DenseMatrix A1 = A + 0.01 * rng.matrix(n, n);
    DenseMatrix A2 = A + 0.01 * rng.matrix(n, n);
    DenseVector b1 = b + 0.01 * rng.vector(n);
    DenseVector b2 = b + 0.01 * rng.vector(n);
    auto x1 = detail::least_squares_qr(A1, b1);
    auto x2 = detail::least_squares_qr(A2, b2);
    if (!x1 || !x2) continue;

    DifferenceInput in{A, b, A1, b1, *x1, A2, b2, *x2, r};
    BoundValue bound = difference_in_kernel_bound(in);
    if (!bound.applicable()) continue;

    AffineSolution exact = exact_solution_set(A, b);
    double off_kernel = exact.kernel.reject(*x1 - *x2).norm();
    CHECK(off_kernel <= *bound.value * (1.0 + 1e-9));
  }
}
