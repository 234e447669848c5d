#include "grasslin/bound_suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "grasslin/general_solver.hpp"
#include "grasslin/grassmann.hpp"

namespace grasslin {

namespace {

struct Trial {
  double measured = 0.0;
  double bound = 0.0;
  bool first_order = false;
};

using TrialFn = std::function<bool(Rng&, Trial&)>;  // false = resample

std::vector<double> spectrum_with_gap(Rng& rng, std::size_t k, std::size_t r,
                                      double tail_frac) {
  std::vector<double> s(k, 0.0);
  for (std::size_t i = 0; i < r; ++i) s[i] = rng.uniform(1.0, 3.0);
  std::sort(s.begin(), s.begin() + r, std::greater<double>());
  double cap = tail_frac * s[r - 1];
  for (std::size_t i = r; i < k; ++i) s[i] = rng.uniform(0.0, cap);
  std::sort(s.begin() + r, s.end(), std::greater<double>());
  return s;
}

DenseMatrix scaled_to(Rng& rng, std::size_t m, std::size_t n, double norm) {
  DenseMatrix E = rng.matrix(m, n);
  double current = spectral_norm(E);
  if (current == 0.0) return E;
  E *= Scalar(norm / current, 0.0);
  return E;
}

DenseVector scaled_vector(Rng& rng, std::size_t n, double norm) {
  DenseVector v = rng.vector(n);
  double current = v.norm();
  if (current == 0.0) return v;
  v *= Scalar(norm / current, 0.0);
  return v;
}

Subspace kernel_of_exact_rank(const SvdFactorization& f, std::size_t r) {
  return Subspace::from_orthonormal(f.V.columns(r, f.source_cols() - r));
}

DenseVector minnorm_solution(const SvdFactorization& f, std::size_t r,
                             const DenseVector& b) {
  DenseVector x(f.source_cols());
  for (std::size_t l = 0; l < r; ++l) {
    Scalar coeff = inner(f.U.column(l), b) / f.sigma[l];
    const Scalar* v = f.V.col_data(l);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += v[i] * coeff;
  }
  return x;
}

struct Shape {
  std::size_t m;
  std::size_t n;
  std::size_t r;  // 1 <= r < n, r <= min(m, n)
};

Shape pick_singular_shape(Rng& rng) {
  std::size_t m = 4 + rng.index(7);
  std::size_t n = 4 + rng.index(7);
  std::size_t rmax = std::min(m, n - 1);
  std::size_t r = 1 + rng.index(rmax);
  return {m, n, r};
}

bool wedin_trial(Rng& rng, Trial& t) {
  Shape s = pick_singular_shape(rng);
  auto sigma = spectrum_with_gap(rng, std::min(s.m, s.n), s.r, 0.3);
  DenseMatrix A = matrix_with_spectrum(rng, s.m, s.n, sigma);
  double gap = sigma[s.r - 1] - (s.r < sigma.size() ? sigma[s.r] : 0.0);
  DenseMatrix dA =
      scaled_to(rng, s.m, s.n, rng.uniform(0.05, 1.0) * 0.49 * gap);

  BoundInput in{A, dA, std::nullopt, std::nullopt, s.r, std::nullopt};
  BoundValue bound = wedin_kernel_bound(in);
  if (!bound.applicable()) return false;

  SvdFactorization fa = svd(A);
  SvdFactorization ft = svd(A + dA);
  double lo = std::max(fa.sigma_or_zero(s.r), ft.sigma_or_zero(s.r));
  double hi = std::min(fa.sigma[s.r - 1], ft.sigma[s.r - 1]);
  double theta = lo + 0.5 * (hi - lo);
  try {
    t.measured = grassmann_distance(numerical_kernel(A, theta),
                                    numerical_kernel(A + dA, theta));
  } catch (const Error&) {
    return false;
  }
  t.bound = *bound.value;
  return true;
}

bool rank_preserving_trial(Rng& rng, Trial& t) {
  Shape s = pick_singular_shape(rng);
  auto sigma = spectrum_with_gap(rng, std::min(s.m, s.n), s.r, 0.0);
  DenseMatrix A = matrix_with_spectrum(rng, s.m, s.n, sigma);
  SvdFactorization fa = svd(A);
  DenseMatrix At = rank_preserving_neighbor(
      rng, fa, s.r, rng.uniform(0.01, 0.3) * sigma[s.r - 1]);

  BoundInput in{A, At - A, std::nullopt, std::nullopt, s.r, std::nullopt};
  BoundValue bound = rank_preserving_kernel_bound(in);
  if (!bound.applicable()) return false;

  SvdFactorization ft = svd(At);
  t.measured = grassmann_distance(kernel_of_exact_rank(fa, s.r),
                                  kernel_of_exact_rank(ft, s.r));
  t.bound = *bound.value;
  return true;
}

bool consistent_solution_trial(Rng& rng, Trial& t) {
  Shape s = pick_singular_shape(rng);
  auto sigma = spectrum_with_gap(rng, std::min(s.m, s.n), s.r, 0.0);
  DenseMatrix A = matrix_with_spectrum(rng, s.m, s.n, sigma);
  SvdFactorization fa = svd(A);
  DenseVector x = scaled_vector(rng, s.n, rng.uniform(0.5, 2.0));
  DenseVector b = A * x;

  DenseMatrix At = rank_preserving_neighbor(
      rng, fa, s.r, rng.uniform(0.005, 0.1) * sigma[s.r - 1]);
  DenseVector xt = x + scaled_vector(rng, s.n, rng.uniform(0.0, 0.1));
  DenseVector bt = At * xt;

  BoundInput in{A, At - A, b, bt - b, s.r, std::nullopt};
  BoundValue bound = consistent_solution_bound(in);
  if (!bound.applicable()) return false;
  try {
    t.measured = solution_distance(A, b, At, bt);
  } catch (const Error&) {
    return false;
  }
  t.bound = *bound.value;
  return true;
}

bool underdetermined_trial(Rng& rng, Trial& t) {
  std::size_t m = 3 + rng.index(5);
  std::size_t n = m + 1 + rng.index(5);
  std::vector<double> sigma(m);
  for (double& v : sigma) v = rng.uniform(0.5, 2.0);
  std::sort(sigma.begin(), sigma.end(), std::greater<double>());
  DenseMatrix A = matrix_with_spectrum(rng, m, n, sigma);
  DenseVector b = rng.vector(m);
  if (b.norm() < 0.1) return false;

  double scale = 1e-6 * sigma[0];
  DenseMatrix dA = scaled_to(rng, m, n, rng.uniform(0.2, 1.0) * scale);
  DenseVector db = scaled_vector(rng, m, rng.uniform(0.2, 1.0) * 1e-6 * b.norm());

  BoundInput in{A, dA, b, db, m, std::nullopt};
  BoundValue bound = underdetermined_minnorm_bound(in);
  if (!bound.applicable()) return false;

  DenseVector x = pseudoinverse(A) * b;
  DenseVector xt = pseudoinverse(A + dA) * (b + db);
  if (x.norm() == 0.0) return false;
  t.measured = (xt - x).norm() / x.norm();
  t.bound = *bound.value;
  t.first_order = true;
  return true;
}

bool homogeneous_trial(Rng& rng, Trial& t) {
  Shape s = pick_singular_shape(rng);
  auto sigma = spectrum_with_gap(rng, std::min(s.m, s.n), s.r, 0.0);
  DenseMatrix A = matrix_with_spectrum(rng, s.m, s.n, sigma);
  double dn = rng.uniform(0.05, 1.0) * 0.49 * sigma[s.r - 1];
  DenseMatrix dA = scaled_to(rng, s.m, s.n, dn);

  BoundInput in{A, dA, std::nullopt, std::nullopt, s.r, std::nullopt};
  BoundValue bound = homogeneous_forward_bound(in);
  if (!bound.applicable()) return false;

  dn = spectral_norm(dA);
  double theta = dn + rng.uniform(0.3, 0.7) * (sigma[s.r - 1] - 2.0 * dn);
  try {
    t.measured = grassmann_distance(numerical_kernel(A + dA, theta),
                                    kernel_of_exact_rank(svd(A), s.r));
  } catch (const Error&) {
    return false;
  }
  t.bound = *bound.value;
  return true;
}

bool general_forward_trial(Rng& rng, Trial& t) {
  Shape s = pick_singular_shape(rng);
  auto sigma = spectrum_with_gap(rng, std::min(s.m, s.n), s.r, 0.0);
  DenseMatrix A = matrix_with_spectrum(rng, s.m, s.n, sigma);
  SvdFactorization fa = svd(A);
  DenseVector x = scaled_vector(rng, s.n, rng.uniform(0.5, 2.0));
  DenseVector b = A * x;
  double sigma_r = sigma[s.r - 1];
  double omega = std::sqrt(4.0 * b.norm() * b.norm() / (sigma_r * sigma_r) + 2.0);
  double cap = sigma_r / (omega + 1.0);

  double target = rng.uniform(0.05, 0.9) * cap;
  double w = rng.uniform(0.1, 0.9);
  DenseMatrix dA = scaled_to(rng, s.m, s.n, target * std::sqrt(w));
  DenseVector db = scaled_vector(rng, s.m, target * std::sqrt(1.0 - w));

  BoundInput in{A, dA, b, db, s.r, std::nullopt};
  BoundValue bound = general_forward_bound(in);
  if (!bound.applicable()) return false;

  double pair = pair_norm(dA, db);
  double theta = omega * pair + rng.uniform(0.3, 0.7) *
                                    (sigma_r - pair - omega * pair);
  GeneralSolution sol;
  try {
    sol = solve_general(A + dA, b + db, SolverConfig{theta});
  } catch (const Error&) {
    return false;
  }
  if (sol.is_empty()) return false;

  AffineSolution exact{minnorm_solution(fa, s.r, b), kernel_of_exact_rank(fa, s.r)};
  t.measured = affine_distance(*sol.affine, exact);
  t.bound = *bound.value;
  return true;
}

bool particular_trial(Rng& rng, Trial& t) {
  std::size_t n = 4 + rng.index(7);
  std::size_t r = 1 + rng.index(n - 1);
  auto sigma = spectrum_with_gap(rng, n, r, 0.0);
  DenseMatrix A = matrix_with_spectrum(rng, n, n, sigma);
  SvdFactorization fa = svd(A);
  DenseVector x = scaled_vector(rng, n, rng.uniform(0.5, 2.0));
  DenseVector b = A * x;
  if (b.norm() < 0.05) return false;

  DenseMatrix dA =
      scaled_to(rng, n, n, rng.uniform(0.05, 1.0) * 0.4 * sigma[r - 1]);
  DenseVector db = scaled_vector(rng, n, rng.uniform(0.0, 0.01) * b.norm());

  auto xt = detail::least_squares_qr(A + dA, b + db);
  if (!xt) return false;

  BoundInput in{A, dA, b, db, r, std::nullopt};
  ParticularSolutionBound bound = particular_solution_bound(in, xt->norm());
  if (!bound.bound.applicable()) return false;

  Subspace N = kernel_of_exact_rank(fa, r);
  DenseVector xstar = minnorm_solution(fa, r, b) + N.project(*xt);
  if (xstar.norm() < 1e-6) return false;
  t.measured = (*xt - xstar).norm() / xstar.norm();
  t.bound = *bound.bound.value;
  return true;
}

bool difference_trial(Rng& rng, Trial& t) {
  std::size_t n = 4 + rng.index(7);
  std::size_t r = 1 + rng.index(n - 1);
  auto sigma = spectrum_with_gap(rng, n, r, 0.0);
  DenseMatrix A = matrix_with_spectrum(rng, n, n, sigma);
  SvdFactorization fa = svd(A);
  DenseVector x = scaled_vector(rng, n, rng.uniform(0.5, 2.0));
  DenseVector b = A * x;

  DenseMatrix A1 = A + scaled_to(rng, n, n, rng.uniform(0.001, 0.05) * sigma[r - 1]);
  DenseMatrix A2 = A + scaled_to(rng, n, n, rng.uniform(0.001, 0.05) * sigma[r - 1]);
  DenseVector b1 = b + scaled_vector(rng, n, rng.uniform(0.0, 0.05) * b.norm());
  DenseVector b2 = b + scaled_vector(rng, n, rng.uniform(0.0, 0.05) * b.norm());
  auto x1 = detail::least_squares_qr(A1, b1);
  auto x2 = detail::least_squares_qr(A2, b2);
  if (!x1 || !x2) return false;

  DifferenceInput in{A, b, A1, b1, *x1, A2, b2, *x2, r};
  BoundValue bound = difference_in_kernel_bound(in);
  if (!bound.applicable()) return false;

  Subspace N = kernel_of_exact_rank(fa, r);
  t.measured = N.reject(*x1 - *x2).norm();
  t.bound = *bound.value;
  return true;
}

bool illcond_trial(Rng& rng, Trial& t) {
  std::size_t n = 4 + rng.index(7);
  std::size_t r = n - 1 - rng.index(std::min<std::size_t>(2, n - 2));
  auto sigma = spectrum_with_gap(rng, n, r, 0.0);
  for (std::size_t i = r; i < n; ++i) sigma[i] = rng.uniform(0.0, 1e-6);
  std::sort(sigma.begin() + r, sigma.end(), std::greater<double>());
  DenseMatrix A = matrix_with_spectrum(rng, n, n, sigma);
  DenseVector xstar = scaled_vector(rng, n, rng.uniform(0.5, 2.0));
  DenseVector b = A * xstar;
  if (b.norm() < 0.05) return false;

  double sigma_r = sigma[r - 1];
  double sigma_r1 = sigma[r];
  double cap = std::min(sigma_r - sigma_r1, (2.0 * std::sqrt(3.0) - 3.0) * sigma_r);
  DenseMatrix dA = scaled_to(rng, n, n, rng.uniform(0.01, 0.9) * cap);
  DenseVector db = scaled_vector(rng, n, rng.uniform(0.0, 0.01) * b.norm());

  BoundInput in{A, dA, b, db, r, std::nullopt};
  BoundValue bound = illcond_containment_bound(in);
  if (!bound.applicable()) return false;

  SvdFactorization ft = svd(A + dA);
  double lo = ft.sigma_or_zero(r);
  double hi = ft.sigma[r - 1];
  double theta = lo + 0.5 * (hi - lo);
  ThetaProjection P(ft, numerical_rank(ft, theta));
  DenseVector anchor = P.apply_pinv(b + db);
  AffineSolution set{anchor,
                     Subspace::from_orthonormal(P.kernel_basis())};
  auto [nearest, coeffs] = nearest_in_affine(set, xstar);
  (void)coeffs;
  t.measured = (nearest - xstar).norm() / xstar.norm();
  t.bound = *bound.value;
  return true;
}

bool tsvd_trial(Rng& rng, Trial& t) {
  Shape s = pick_singular_shape(rng);
  bool exact_case = rng.uniform() < 0.5;
  auto sigma = spectrum_with_gap(rng, std::min(s.m, s.n), s.r,
                                 exact_case ? 0.0 : 0.3);
  DenseMatrix A = matrix_with_spectrum(rng, s.m, s.n, sigma);
  SvdFactorization fa = svd(A);
  double sigma_r = sigma[s.r - 1];
  double sigma_r1 = s.r < sigma.size() ? sigma[s.r] : 0.0;
  double theta = sigma_r1 + rng.uniform(0.4, 0.6) * (sigma_r - sigma_r1);

  ThetaProjection P(fa, numerical_rank(fa, theta));
  DenseVector b;
  if (exact_case) {
    b = A * scaled_vector(rng, s.n, rng.uniform(0.5, 2.0));
  } else {
    DenseVector raw = rng.vector(s.m);
    DenseVector range_part = P.project_onto_range(raw);
    DenseVector perp = raw - range_part;
    double pn = perp.norm();
    b = range_part;
    if (pn > 0.0) {
      Scalar shrink(rng.uniform(0.1, 0.4) * theta / pn, 0.0);
      perp *= shrink;
      b += perp;
    }
  }
  if (b.norm() < 0.05) return false;

  double scale = 1e-6 * sigma[0];
  DenseMatrix dA = scaled_to(rng, s.m, s.n, rng.uniform(0.2, 1.0) * scale);
  DenseVector db = scaled_vector(rng, s.m, rng.uniform(0.2, 1.0) * 1e-6 * b.norm());

  BoundInput in{A, dA, b, db, s.r, theta};
  BoundValue bound = tsvd_perturbation_bound(in);
  if (!bound.applicable()) return false;

  SvdFactorization ft = svd(A + dA);
  ThetaProjection Pt(ft, numerical_rank(ft, theta));
  t.measured = (P.apply_pinv(b) - Pt.apply_pinv(b + db)).norm();
  t.bound = *bound.value;
  t.first_order = bound.first_order;
  return true;
}

const std::vector<std::pair<std::string, TrialFn>>& registry() {
  static const std::vector<std::pair<std::string, TrialFn>> table = {
      {"wedin_kernel_bound", wedin_trial},
      {"rank_preserving_kernel_bound", rank_preserving_trial},
      {"consistent_solution_bound", consistent_solution_trial},
      {"underdetermined_minnorm_bound", underdetermined_trial},
      {"homogeneous_forward_bound", homogeneous_trial},
      {"general_forward_bound", general_forward_trial},
      {"particular_solution_bound", particular_trial},
      {"difference_in_kernel_bound", difference_trial},
      {"illcond_containment_bound", illcond_trial},
      {"tsvd_perturbation_bound", tsvd_trial},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& bound_suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

SuiteResult run_bound_suite(const std::string& name, std::uint64_t seed,
                            std::size_t trials) {
  const TrialFn* fn = nullptr;
  for (const auto& [key, value] : registry())
    if (key == name) fn = &value;
  if (!fn) throw Error(ErrorCode::InvalidArgument, "unknown bound suite " + name);

  SuiteResult result;
  result.name = name;
  double ratio_sum = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng(seed ^ (0x9E3779B97F4A7C15ULL * (i + 1)));
    Trial trial;
    bool ok = false;
    for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
      ok = (*fn)(rng, trial);
      if (!ok) ++result.resamples;
    }
    if (!ok)
      throw Error(ErrorCode::InvalidArgument,
                  "suite construction kept failing hypotheses: " + name);
    ++result.trials;

    double slack = trial.first_order ? 1e-3 : 1e-9;
    double limit = trial.bound * (1.0 + slack) + 1e-13 * (1.0 + trial.bound);
    if (trial.measured > limit) ++result.violations;
    double ratio = trial.bound > 0.0 ? trial.measured / trial.bound
                                     : (trial.measured > 0.0 ? 1e300 : 0.0);
    result.worst_ratio = std::max(result.worst_ratio, ratio);
    ratio_sum += ratio;
  }
  result.mean_ratio = result.trials ? ratio_sum / result.trials : 0.0;
  return result;
}

std::vector<SuiteResult> run_all_bound_suites(std::uint64_t seed,
                                              std::size_t trials) {
  std::vector<SuiteResult> out;
  for (const std::string& name : bound_suite_names())
    out.push_back(run_bound_suite(name, seed, trials));
  return out;
}

}  // namespace grasslin
