#include "grasslin/perturbation_bounds.hpp"

#include <algorithm>
#include <cmath>

namespace grasslin {

namespace {

struct SpectrumView {
  double sigma1;
  double sigma_r;
  double sigma_r1;
};

SpectrumView spectrum_at(const SvdFactorization& f, std::size_t r) {
  if (r == 0 || r > f.sigma.size())
    throw Error(ErrorCode::InvalidArgument, "rank out of range for bound");
  return {f.sigma.front(), f.sigma[r - 1], f.sigma_or_zero(r)};
}

DenseVector zero_like(const std::optional<DenseVector>& v, std::size_t n) {
  return v ? *v : DenseVector(n);
}

void push(BoundValue& out, const std::string& condition, bool ok) {
  out.hypothesis_report.push_back({condition, ok});
  if (!ok) out.hypotheses_met = false;
}

void finalize(BoundValue& out, double value) {
  if (out.hypotheses_met) out.value = value;
}

double residual_of(const DenseMatrix& A, const DenseVector& x,
                   const DenseVector& b) {
  return (A * x - b).norm();
}

}  // namespace

BoundValue wedin_kernel_bound(const BoundInput& in) {
  SvdFactorization f = svd(in.A);
  SpectrumView s = spectrum_at(f, in.r);
  double dn = spectral_norm(in.dA);

  BoundValue out;
  out.hypotheses_met = true;
  push(out, "sigma_r(A) > sigma_r+1(A)", s.sigma_r > s.sigma_r1);
  push(out, "||dA|| < (sigma_r - sigma_r+1)/2",
       dn < 0.5 * (s.sigma_r - s.sigma_r1));

  SvdFactorization ft = svd(in.A + in.dA);
  double lo = std::max(s.sigma_r1, ft.sigma_or_zero(in.r));
  double hi = std::min(s.sigma_r, in.r <= ft.sigma.size() ? ft.sigma[in.r - 1] : 0.0);
  push(out, "theta interval nonempty", lo < hi);

  if (out.hypotheses_met) {
    double denom = 1.0 - (s.sigma_r1 + dn) / s.sigma_r;
    finalize(out, (s.sigma1 / s.sigma_r) / denom * (dn / s.sigma1));
  }
  return out;
}

BoundValue rank_preserving_kernel_bound(const BoundInput& in) {
  SvdFactorization f = svd(in.A);
  SpectrumView s = spectrum_at(f, in.r);
  double dn = spectral_norm(in.dA);

  BoundValue out;
  out.hypotheses_met = true;
  push(out, "rank(A) = r", exact_rank(f) == in.r);
  push(out, "rank(A + dA) = r", exact_rank(svd(in.A + in.dA)) == in.r);
  push(out, "||dA|| < sigma_r(A)", dn < s.sigma_r);
  if (out.hypotheses_met)
    finalize(out, (s.sigma1 / s.sigma_r) * (dn / s.sigma1));
  return out;
}

BoundValue consistent_solution_bound(const BoundInput& in) {
  if (!in.b) throw Error(ErrorCode::InvalidArgument, "bound requires b");
  SvdFactorization f = svd(in.A);
  SpectrumView s = spectrum_at(f, in.r);
  double dn = spectral_norm(in.dA);
  DenseVector db = zero_like(in.db, in.b->size());

  BoundValue out;
  out.hypotheses_met = true;
  push(out, "sqrt(2) ||A^+|| ||dA|| < 1", std::sqrt(2.0) * dn / s.sigma_r < 1.0);
  push(out, "rank(A) = r", exact_rank(f) == in.r);
  push(out, "rank(A + dA) = r", exact_rank(svd(in.A + in.dA)) == in.r);

  DenseVector xstar = pseudoinverse(in.A) * (*in.b);
  double scale = std::max({in.b->norm(), s.sigma1 * xstar.norm(), 1.0});
  push(out, "b in Range(A)",
       residual_of(in.A, xstar, *in.b) <= 1e-8 * scale);
  DenseVector btilde = *in.b + db;
  DenseMatrix Atilde = in.A + in.dA;
  push(out, "b + db in Range(A + dA)",
       residual_of(Atilde, pseudoinverse(Atilde) * btilde, btilde) <=
           1e-8 * scale);

  if (out.hypotheses_met) {
    double kappa = s.sigma1 / s.sigma_r;
    double numer = std::sqrt(2.0 * xstar.norm() * xstar.norm() + 1.0);
    double denom = s.sigma1 - std::sqrt(2.0) * kappa * dn;
    finalize(out, kappa * numer / denom * pair_norm(in.dA, db));
  }
  return out;
}

BoundValue underdetermined_minnorm_bound(const BoundInput& in) {
  if (!in.b || in.b->norm() == 0.0)
    throw Error(ErrorCode::ZeroRhs, "underdetermined bound needs b != 0");
  SvdFactorization f = svd(in.A);
  const std::size_t m = in.A.rows();
  SpectrumView s = spectrum_at(f, m);
  double dn = spectral_norm(in.dA);
  DenseVector db = zero_like(in.db, in.b->size());

  BoundValue out;
  out.first_order = true;
  out.hypotheses_met = true;
  push(out, "m < n", m < in.A.cols());
  push(out, "rank(A) = m", exact_rank(f) == m);
  push(out, "sqrt(2) ||A^+|| ||dA|| < 1", std::sqrt(2.0) * dn / s.sigma_r < 1.0);
  if (out.hypotheses_met) {
    double kappa = s.sigma1 / s.sigma_r;
    finalize(out,
             kappa * (std::sqrt(2.0) * dn / s.sigma1 + db.norm() / in.b->norm()));
  }
  return out;
}

BoundValue homogeneous_forward_bound(const BoundInput& in) {
  SvdFactorization f = svd(in.A);
  SpectrumView s = spectrum_at(f, in.r);
  double dn = spectral_norm(in.dA);

  BoundValue out;
  out.hypotheses_met = true;
  push(out, "||dA|| < ||A^+||^-1 / 2", dn < 0.5 * s.sigma_r);
  if (out.hypotheses_met) {
    double kappa = s.sigma1 / s.sigma_r;
    finalize(out, kappa / (1.0 - dn / s.sigma_r) * (dn / s.sigma1));
  }
  return out;
}

ToleranceWindow tolerance_window(const DenseMatrix& A, double dA_norm,
                                 const std::optional<DenseVector>& b) {
  if (!(dA_norm >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "negative data-error bound");
  SvdFactorization f = svd(A);
  std::size_t r = 0;
  while (r < f.sigma.size() && f.sigma[r] > dA_norm) ++r;
  if (r == 0)
    throw Error(ErrorCode::EmptyWindow, "data error swamps the spectrum");
  double sigma_r = f.sigma[r - 1];
  if (!(dA_norm < 0.5 * sigma_r))
    throw Error(ErrorCode::EmptyWindow,
                "data error exceeds half the trailing singular value");

  double mu = dA_norm;
  if (b) {
    double omega =
        std::sqrt(4.0 * b->norm() * b->norm() / (sigma_r * sigma_r) + 2.0);
    mu = omega * dA_norm;
  }
  double eta = sigma_r - dA_norm;
  if (!(mu < eta))
    throw Error(ErrorCode::EmptyWindow, "omega-scaled lower end meets eta");
  return {mu, eta};
}

BoundValue general_forward_bound(const BoundInput& in) {
  if (!in.b) throw Error(ErrorCode::InvalidArgument, "bound requires b");
  SvdFactorization f = svd(in.A);
  SpectrumView s = spectrum_at(f, in.r);
  double dn = spectral_norm(in.dA);
  DenseVector db = zero_like(in.db, in.b->size());
  double pair = pair_norm(in.dA, db);
  double omega =
      std::sqrt(4.0 * in.b->norm() * in.b->norm() / (s.sigma_r * s.sigma_r) + 2.0);

  BoundValue out;
  out.hypotheses_met = true;
  push(out, "||(dA, db)|| < 1 / ((omega + 1) ||A^+||)",
       pair < s.sigma_r / (omega + 1.0));
  if (out.hypotheses_met) {
    DenseVector xstar = pseudoinverse(in.A) * (*in.b);
    double kappa = s.sigma1 / s.sigma_r;
    double numer = std::sqrt(4.0 * xstar.norm() * xstar.norm() + 1.0);
    double denom = s.sigma1 * (1.0 - dn / s.sigma_r);
    finalize(out, kappa * numer / denom * pair);
  }
  return out;
}

ParticularSolutionBound particular_solution_bound(const BoundInput& in,
                                                  double xtilde_norm) {
  SvdFactorization f = svd(in.A);
  SpectrumView s = spectrum_at(f, in.r);
  double dn = spectral_norm(in.dA);
  DenseVector db = zero_like(in.db, in.A.rows());

  ParticularSolutionBound result;
  BoundValue& out = result.bound;
  out.hypotheses_met = true;
  push(out, "||dA|| <= 0.46 ||A^+||^-1", dn <= 0.46 * s.sigma_r);

  double kappa = s.sigma1 / s.sigma_r;
  double lead = kappa / (1.0 - dn / s.sigma_r);
  bool nonzero_b = in.b && in.b->norm() > 0.0;

  if (out.hypotheses_met) {
    if (nonzero_b) {
      finalize(out, lead * (2.0 * std::sqrt(2.0) * dn / s.sigma1 +
                            db.norm() / in.b->norm()));
    } else {
      finalize(out,
               lead * (xtilde_norm * dn / s.sigma1 + db.norm() / s.sigma1));
      result.unit_homogeneous = lead * dn / s.sigma1;
      if (xtilde_norm > 0.0 && db.norm() > 0.0)
        result.inverse_iteration =
            lead / s.sigma1 * (dn + db.norm() / xtilde_norm);
    }
  }
  return result;
}

BoundValue difference_in_kernel_bound(const DifferenceInput& in) {
  SvdFactorization f = svd(in.A);
  SpectrumView s = spectrum_at(f, in.r);

  BoundValue out;
  out.hypotheses_met = true;
  push(out, "rank(A) < n", in.r < in.A.cols());
  double scale =
      std::max({in.b.norm(), s.sigma1 * in.x1.norm(), s.sigma1 * in.x2.norm(), 1.0});
  push(out, "A1 x1 = b1", residual_of(in.A1, in.x1, in.b1) <= 1e-8 * scale);
  push(out, "A2 x2 = b2", residual_of(in.A2, in.x2, in.b2) <= 1e-8 * scale);

  if (out.hypotheses_met) {
    double kappa = s.sigma1 / s.sigma_r;
    double total = (in.b - in.b1).norm() / s.sigma1 +
                   (in.b - in.b2).norm() / s.sigma1 +
                   spectral_norm(in.A - in.A1) / s.sigma1 * in.x1.norm() +
                   spectral_norm(in.A - in.A2) / s.sigma1 * in.x2.norm();
    finalize(out, kappa * total);
  }
  return out;
}

BoundValue illcond_containment_bound(const BoundInput& in) {
  if (!in.b) throw Error(ErrorCode::InvalidArgument, "bound requires b");
  SvdFactorization f = svd(in.A);
  SpectrumView s = spectrum_at(f, in.r);
  double dn = spectral_norm(in.dA);
  DenseVector db = zero_like(in.db, in.b->size());

  BoundValue out;
  out.hypotheses_met = true;
  push(out, "sigma_r(A) > sigma_r+1(A)", s.sigma_r > s.sigma_r1);
  push(out, "||dA|| < min{sigma_r - sigma_r+1, (2 sqrt(3) - 3) sigma_r}",
       dn < std::min(s.sigma_r - s.sigma_r1,
                     (2.0 * std::sqrt(3.0) - 3.0) * s.sigma_r));
  push(out, "b != 0", in.b->norm() > 0.0);

  if (out.hypotheses_met) {
    double denom = 1.0 - (s.sigma_r1 - dn) / s.sigma_r;
    finalize(out, (s.sigma1 / s.sigma_r) / denom *
                      ((2.0 + std::sqrt(2.0)) * dn / s.sigma1 +
                       db.norm() / in.b->norm()));
  }
  return out;
}

BoundValue tsvd_perturbation_bound(const BoundInput& in) {
  if (!in.b) throw Error(ErrorCode::InvalidArgument, "bound requires b");
  if (!in.theta) throw Error(ErrorCode::InvalidArgument, "bound requires theta");
  SvdFactorization f = svd(in.A);
  ThetaProjection P(f, numerical_rank(f, *in.theta));
  const std::size_t r = P.rank();
  if (r == 0) throw Error(ErrorCode::ZeroRank, "theta above the spectrum");
  SpectrumView s = spectrum_at(f, r);
  double dn = spectral_norm(in.dA);
  DenseVector db = zero_like(in.db, in.b->size());
  double theta = *in.theta;

  BoundValue out;
  out.hypotheses_met = true;
  push(out,
       "||dA|| < min{(sigma_r - sigma_r+1)/2, sigma_r - theta, theta - sigma_r+1}",
       dn < std::min({0.5 * (s.sigma_r - s.sigma_r1), s.sigma_r - theta,
                      theta - s.sigma_r1}));
  DenseVector projected = P.project_onto_range(*in.b);
  push(out, "||b - A_theta A_theta^+ b|| < theta",
       (*in.b - projected).norm() < theta);

  if (!out.hypotheses_met) return out;

  DenseVector x_theta = P.apply_pinv(*in.b);
  double kappa = s.sigma1 / s.sigma_r;

  bool exact_case = exact_rank(f) == r;
  if (exact_case) {
    double scale = std::max({in.b->norm(), s.sigma1 * x_theta.norm(), 1.0});
    exact_case = residual_of(in.A, x_theta, *in.b) <= 1e-8 * scale;
  }
  if (exact_case) {
    finalize(out, kappa / (1.0 - dn / s.sigma_r) *
                      (2.0 * x_theta.norm() * dn / s.sigma1 +
                       db.norm() / s.sigma1));
  } else {
    out.first_order = true;
    double zeta = x_theta.norm() +
                  (1.0 + x_theta.norm()) / (1.0 - s.sigma_r1 / s.sigma_r);
    finalize(out, kappa * (zeta * dn / s.sigma1 + db.norm() / s.sigma1));
  }
  return out;
}

StackedNorms stacked_operator_norms(const DenseMatrix& A, double theta,
                                    double mu, double guard) {
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");
  SvdFactorization f = svd(A);
  RankDecision decision = numerical_rank(f, theta, guard);
  const double sigma1 = f.sigma.empty() ? 0.0 : f.sigma.front();
  const double sigma_r = decision.sigma_r.value_or(0.0);
  const double sigma_r1 = decision.sigma_r_plus_1;
  const double eta = A.rows() >= A.cols() ? f.sigma.back() : 0.0;

  StackedNorms norms;
  norms.norm = std::max(sigma1, std::hypot(mu, sigma_r1));
  if (decision.rank == 0) {
    norms.pinv_norm = 1.0 / std::hypot(mu, eta);
  } else {
    norms.pinv_norm = std::max(1.0 / sigma_r, 1.0 / std::hypot(mu, eta));
  }
  return norms;
}

ConditionBracket condition_bracket(const DenseMatrix& A, double dA_norm,
                                   double theta) {
  SvdFactorization f = svd(A);
  std::size_t r = exact_rank(f);
  if (r == 0)
    throw Error(ErrorCode::HypothesisViolated, "zero matrix has no bracket");
  double sigma_r = f.sigma[r - 1];
  if (!(dA_norm < sigma_r - theta))
    throw Error(ErrorCode::HypothesisViolated,
                "||dA|| must stay below ||A^+||^-1 - theta");
  double kappa = f.sigma.front() / sigma_r;
  return {kappa - 2.0 * dA_norm, kappa + 2.0 * dA_norm};
}

double lipschitz_diagnostic(const DenseMatrix& A, const DenseVector& b,
                            double theta, double guard) {
  if (A.rows() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "rows(A) != len(b)");
  SvdFactorization f = svd(A);
  ThetaProjection P(f, numerical_rank(f, theta, guard));
  if (P.rank() == 0)
    throw Error(ErrorCode::ZeroRank, "theta above the spectrum");
  double sigma1 = f.sigma.front();
  double sigma_r = P.retained_sigma().back();
  double sigma_r1 = P.decision().sigma_r_plus_1;
  double minnorm = P.apply_pinv(b).norm();
  double zeta = minnorm + (1.0 + minnorm) / (1.0 - sigma_r1 / sigma_r);
  double kappa = sigma1 / sigma_r;
  return kappa * std::sqrt(zeta * zeta + 1.0) /
         (sigma1 * (1.0 - sigma_r1 / sigma_r));
}

DenseMatrix rank_preserving_neighbor(Rng& rng, const SvdFactorization& f,
                                         std::size_t r, double scale) {
  const std::size_t m = f.U.rows();
  const std::size_t n = f.V.rows();

  // Jitter the factors and re-orthonormalize; the product keeps rank r
  // exactly while moving within the rank-r manifold.
  DenseMatrix Uj = f.U.columns(0, r);
  DenseMatrix Vj = f.V.columns(0, r);
  double unit = scale / std::max(f.sigma.front(), 1e-30);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < m; ++i)
      Uj(i, j) += 0.3 * unit * rng.complex_gaussian();
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < n; ++i)
      Vj(i, j) += 0.3 * unit * rng.complex_gaussian();

  detail::HouseholderQr qu(Uj);
  detail::HouseholderQr qv(Vj);
  DenseMatrix U = qu.q_columns(r);
  DenseMatrix V = qv.q_columns(r);

  std::vector<double> sigma(f.sigma.begin(), f.sigma.begin() + r);
  for (double& s : sigma)
    s = std::max(s * (1.0 + 0.3 * unit * rng.gaussian()), 1e-8 * f.sigma.front());

  DenseMatrix result(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    Scalar* out = result.col_data(j);
    for (std::size_t l = 0; l < r; ++l) {
      Scalar factor = sigma[l] * std::conj(V(j, l));
      const Scalar* u = U.col_data(l);
      for (std::size_t i = 0; i < m; ++i) out[i] += u[i] * factor;
    }
  }
  return result;
}

}  // namespace grasslin
