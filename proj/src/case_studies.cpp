#include "grasslin/case_studies.hpp"

#include <cmath>

namespace grasslin {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

DenseMatrix real_matrix(const std::vector<std::vector<double>>& rows) {
  return DenseMatrix::from_real_rows(rows);
}

DenseMatrix poly_column(const std::vector<double>& ascending) {
  DenseMatrix p(ascending.size(), 1);
  for (std::size_t i = 0; i < ascending.size(); ++i)
    p(i, 0) = Scalar(ascending[i], 0.0);
  return p;
}

DenseMatrix pad_poly(const DenseMatrix& p, std::size_t coeff_count) {
  DenseMatrix out(coeff_count, 1);
  for (std::size_t i = 0; i < p.rows() && i < coeff_count; ++i)
    out(i, 0) = p(i, 0);
  return out;
}

}  // namespace

DenseMatrix poly_multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != 1 || b.cols() != 1)
    throw Error(ErrorCode::ShapeMismatch, "polynomials are coefficient columns");
  DenseMatrix out(a.rows() + b.rows() - 1, 1);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j)
      out(i + j, 0) += a(i, 0) * b(j, 0);
  return out;
}

CaseStudy sylvester_case(double t) {
  DenseMatrix A2 = real_matrix({{1, -1}, {1, -1}});
  DenseMatrix B2 = real_matrix({{-5.0 / 3.0 + t, 1}, {-1, -1.0 / 3.0 + 2.0 * t}});
  DenseMatrix C = real_matrix({{1, 0}, {2, -1}});

  Shape domain{SpaceDescriptor::matrix_space(2, 2)};
  LinearOperator op;
  op.domain = domain;
  op.codomain = domain;
  op.apply = [A2, B2, domain](const StructuredElement& e) {
    return make_element(domain, {A2 * e.parts[0] + e.parts[0] * B2});
  };

  CaseStudy cs;
  cs.name = "sylvester";
  cs.theta = 1e-3;
  cs.op = op;
  cs.op_rhs = make_element(domain, {C});
  cs.A = materialize(op).matrix;
  cs.b = pack(*cs.op_rhs);

  cs.vectors["exact_particular"] =
      DenseVector::from_real({0.25, -0.75, -0.25, -0.25});
  cs.matrices["exact_kernel_generators"] = real_matrix({{1, -1},
                                                        {0, -1},
                                                        {0, 1},
                                                        {1, 1}});
  return cs;
}

CaseStudy bezout_case() {
  CaseStudy cs;
  cs.name = "bezout";
  cs.theta = 5e-4;
  cs.A = real_matrix({
      {2.5714, 0, 0, 0, -1.7143, 0, 0.8571, 0, 0},
      {3.8571, 2.5714, 0, 0, -1.7143, -1.7143, 1.2857, 0.8571, 0},
      {-3.0000, 3.8571, 2.5714, 0, 0.4286, -1.7143, 2.1429, 1.2857, 0.8571},
      {-6.4286, -3.0000, 3.8571, 2.5714, 0.4286, 0.4286, 2.5714, 2.1429, 1.2857},
      {-2.1429, -6.4286, -3.0000, 3.8571, 0, 0.4286, 3.4286, 2.5714, 2.1429},
      {0, -2.1429, -6.4286, -3.0000, -3.4286, 0, 3.8571, 3.4286, 2.5714},
      {0, 0, -2.1429, -6.4286, -5.1429, -3.4286, 1.2857, 3.8571, 3.4286},
      {0, 0, 0, -2.1429, -1.7143, -5.1429, 0, 1.2857, 3.8571},
      {0, 0, 0, 0, 0, -1.7143, 0, 0, 1.2857},
  });
  cs.b = DenseVector::from_real({4.6667, 7.0, 2.3333, 0, 0, 0, 0, 0, 0});

  DenseMatrix f1 = poly_column({2.5714, 3.8571, -3.0, -6.4286, -2.1429});
  DenseMatrix f2 =
      poly_column({-1.7143, -1.7143, 0.4286, 0.4286, 0.0, -3.4286, -5.1429,
                   -1.7143});
  DenseMatrix f3 = poly_column({0.8571, 1.2857, 2.1429, 2.5714, 3.4286, 3.8571,
                                1.2857});

  Shape domain{SpaceDescriptor::poly_space(3), SpaceDescriptor::poly_space(1),
               SpaceDescriptor::poly_space(2)};
  Shape codomain{SpaceDescriptor::poly_space(8)};
  LinearOperator op;
  op.domain = domain;
  op.codomain = codomain;
  op.apply = [f1, f2, f3, codomain](const StructuredElement& e) {
    DenseMatrix sum = pad_poly(poly_multiply(e.parts[0], f1), 9);
    sum += pad_poly(poly_multiply(e.parts[1], f2), 9);
    sum += pad_poly(poly_multiply(e.parts[2], f3), 9);
    return make_element(codomain, {std::move(sum)});
  };
  cs.op = op;
  cs.op_rhs = make_element(codomain, {poly_column({4.6667, 7.0, 2.3333, 0, 0, 0,
                                                   0, 0, 0})});

  cs.vectors["reference_anchor"] = DenseVector::from_real(
      {0.907108855304999, 0.333222892924586, 0.710289197713311,
       0.599677838683852, -0.799463013829436, 0.0669420537219249,
       1.12432524246405, -0.0664832652437786, 0.0892574807423333});
  cs.vectors["reference_dense_solution"] = DenseVector::from_real(
      {-0.78366, 0.47296, -0.45954, 1.83637, -3.47453, -1.81379, 0.84635,
       -1.57209, -2.41843});
  return cs;
}

CaseStudy division_case() {
  CaseStudy cs;
  cs.name = "division";
  cs.theta = 3.18e-6;

  DenseMatrix A(9, 9);
  for (std::size_t i = 0; i < 9; ++i) A(i, i) = Scalar(1.0, 0.0);
  for (std::size_t i = 1; i < 9; ++i) A(i, i - 1) = Scalar(10.0, 0.0);
  cs.A = A;

  // Right-hand side held at single precision; the rounding is the whole
  // experiment. The float cast reproduces the published decimal digits.
  std::vector<double> exact_rhs(9);
  std::vector<double> exact_x(9);
  std::vector<double> rounded_rhs(9);
  for (std::size_t i = 0; i < 9; ++i) {
    exact_rhs[i] = (11.0 * static_cast<double>(i + 1) - 10.0) / 3.0;
    exact_x[i] = static_cast<double>(i + 1) / 3.0;
    rounded_rhs[i] = static_cast<double>(static_cast<float>(exact_rhs[i]));
  }
  cs.b = DenseVector::from_real(rounded_rhs);
  cs.vectors["exact_rhs"] = DenseVector::from_real(exact_rhs);
  cs.vectors["exact_solution"] = DenseVector::from_real(exact_x);

  // Dense solve carried out in single precision, matching the experiment:
  // forward substitution on the bidiagonal system with float arithmetic.
  std::vector<double> single_solve(9);
  {
    float prev = 0.0f;
    for (std::size_t i = 0; i < 9; ++i) {
      float xi = static_cast<float>(rounded_rhs[i]) - 10.0f * prev;
      single_solve[i] = xi;
      prev = xi;
    }
  }
  cs.vectors["single_dense_solution"] = DenseVector::from_real(single_solve);
  cs.vectors["reference_kernel_direction"] = DenseVector::from_real(
      {0.0, -0.0000001, 0.0000010, -0.0000099, 0.0000995, -0.0009950,
       0.0099499, -0.0994987, 0.9949875});
  cs.vectors["reference_tikhonov"] = DenseVector::from_real(
      {0.3333333, 0.6666670, 0.9999971, 1.3333607, 1.6663934, 2.0027277,
       2.3060572, 2.9394238, 0.2724303});
  cs.vectors["reference_tsvd"] = DenseVector::from_real(
      {0.3333335, 0.6666669, 0.9999967, 1.3333603, 1.6663938, 2.0027270,
       2.3060613, 2.9393935, 0.2727296});
  return cs;
}

CaseStudy regulator_case() {
  DenseMatrix A2 = real_matrix({{1, 1}, {0, 1}});
  DenseMatrix B3 = real_matrix({{0, 1, 0}, {0, 0, 1}, {2, -1, 0}});
  DenseMatrix C = real_matrix({{0}, {0}, {1}});
  DenseMatrix D = real_matrix({{1, 0, -1}});
  DenseMatrix E = real_matrix({{2, 1}, {-1, 1}, {0, 0}});
  DenseMatrix minusF = real_matrix({{1, 0}});

  Shape domain{SpaceDescriptor::matrix_space(3, 2),
               SpaceDescriptor::matrix_space(1, 2)};
  LinearOperator op;
  op.domain = domain;
  op.codomain = domain;
  op.apply = [A2, B3, C, D, domain](const StructuredElement& e) {
    const DenseMatrix& X = e.parts[0];
    const DenseMatrix& U = e.parts[1];
    return make_element(domain, {X * A2 - B3 * X - C * U, D * X});
  };

  CaseStudy cs;
  cs.name = "regulator";
  cs.theta = 1e-10;
  cs.op = op;
  cs.op_rhs = make_element(domain, {E, minusF});
  cs.A = materialize(op).matrix;
  cs.b = pack(*cs.op_rhs);

  const double third = 1.0 / 3.0;
  cs.vectors["reference_anchor"] = DenseVector::from_real(
      {2.0, 0.0, 1.0, -third, 2.0 * third, -third, -3.0, 2.0});
  const double s = 1.0 / std::sqrt(3.0);
  cs.vectors["reference_kernel_direction"] =
      DenseVector::from_real({0.0, 0.0, 0.0, -s, -s, -s, 0.0, 0.0});
  return cs;
}

CaseStudy macaulay_fixture() {
  CaseStudy cs;
  cs.name = "macaulay";
  cs.theta = 2e-4;
  cs.A = real_matrix({
      {0, 1.0000000, 0.9999990, 0, 0, 1.7320499},
      {0, 0.9999990, 1.0000000, 1.7320499, 0, 0},
      {0, 0, 0, 1.0000000, 0.9999990, 0},
      {0, 0, 0, 0.9999990, 1.0000000, 0},
      {0, 0, 0, 0, 1.0000000, 0.9999990},
      {0, 0, 0, 0, 0.9999990, 1.0000000},
  });
  cs.b = DenseVector(6);
  cs.matrices["reference_kernel"] = real_matrix({
      {1.0000000, 0.0000000, 0.0000000},
      {0, -0.7828174, 0.2320854},
      {0, 0.5924006, 0.5618970},
      {0, 0.1099370, -0.4584060},
      {0, -0.1099372, 0.4584060},
      {0, 0.1099374, -0.4584059},
  });
  return cs;
}

namespace {

struct VolterraKernel {
  double kappa;
  mutable bool underflowed = false;

  double operator()(double tau) const {
    if (tau <= 0.0) return 0.0;
    double exponent =
        -1.0 / (4.0 * kappa * kappa * tau) - 1.5 * std::log(tau);
    if (exponent < -745.0) {
      underflowed = true;
      return 0.0;
    }
    return std::exp(exponent) / (2.0 * kappa * std::sqrt(kPi));
  }
};

// Composite Simpson on [lo, hi] with a fixed panel count.
template <typename F>
double simpson(const F& f, double lo, double hi, int panels) {
  double h = (hi - lo) / panels;
  double sum = f(lo) + f(hi);
  for (int p = 1; p < panels; ++p)
    sum += (p % 2 == 1 ? 4.0 : 2.0) * f(lo + p * h);
  return sum * h / 3.0;
}

}  // namespace

CaseStudy volterra_case(double kappa, std::size_t n) {
  if (n < 8) throw Error(ErrorCode::InvalidArgument, "n must be at least 8");
  if (!(kappa > 0.0))
    throw Error(ErrorCode::InvalidArgument, "kappa must be positive");

  CaseStudy cs;
  cs.name = "volterra";
  cs.theta = 1e-6;

  const double h = 1.0 / static_cast<double>(n);
  const int panels = 32;
  VolterraKernel k{kappa};

  auto node = [h](std::size_t j) { return h * static_cast<double>(j); };

  DenseMatrix A(n, n + 1);
  DenseVector b(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double ti = node(i);
    // Node 0 carries only the descending half of its hat function.
    {
      auto f = [&](double t) { return k(ti - t) * (1.0 - (t - node(0)) / h); };
      A(i - 1, 0) = Scalar(simpson(f, node(0), node(1), panels), 0.0);
    }
    for (std::size_t j = 1; j + 1 <= i; ++j) {
      auto up = [&](double t) { return k(ti - t) * ((t - node(j - 1)) / h); };
      auto down = [&](double t) { return k(ti - t) * (1.0 - (t - node(j)) / h); };
      A(i - 1, j) = Scalar(simpson(up, node(j - 1), node(j), panels) +
                               simpson(down, node(j), node(j + 1), panels),
                           0.0);
    }
    {
      auto up = [&](double t) { return k(ti - t) * ((t - node(i - 1)) / h); };
      A(i - 1, i) = Scalar(simpson(up, node(i - 1), node(i), panels), 0.0);
    }
    double g = 0.0;
    for (std::size_t j = 1; j <= i; ++j) {
      auto f = [&](double t) { return k(ti - t); };
      g += simpson(f, node(j - 1), node(j), panels);
    }
    b[i - 1] = Scalar(g, 0.0);
  }

  cs.A = std::move(A);
  cs.b = std::move(b);
  cs.quadrature_underflow = k.underflowed;
  return cs;
}

}  // namespace grasslin
