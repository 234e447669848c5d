#include "grasslin/factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

// Golub-Kahan bidiagonalization with complex Householder reflectors followed
// by implicit-shift QR on the real bidiagonal, full U and V accumulated.
// The bidiagonal sweep logic follows the classic GSL formulation.

namespace grasslin {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Reflector {
  std::vector<Scalar> v;  // v[0] == 1
  Scalar tau{0.0, 0.0};
  double beta = 0.0;
};

// Complex Householder generator, zlarfg convention:
// (I - conj(tau) v v^H) x = beta e_1 with beta real.
Reflector make_reflector(const std::vector<Scalar>& x) {
  Reflector h;
  h.v.assign(x.size(), Scalar(0.0, 0.0));
  h.v[0] = Scalar(1.0, 0.0);

  Scalar alpha = x[0];
  double xnorm = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    xnorm = std::hypot(xnorm, std::abs(x[i]));

  if (xnorm == 0.0 && alpha.imag() == 0.0) {
    h.tau = Scalar(0.0, 0.0);
    h.beta = alpha.real();
    return h;
  }

  double beta = -std::copysign(
      std::hypot(std::hypot(alpha.real(), alpha.imag()), xnorm), alpha.real());
  h.tau = Scalar((beta - alpha.real()) / beta, -alpha.imag() / beta);
  Scalar scale = Scalar(1.0, 0.0) / (alpha - Scalar(beta, 0.0));
  for (std::size_t i = 1; i < x.size(); ++i) h.v[i] = scale * x[i];
  h.beta = beta;
  return h;
}

void rotate_columns(DenseMatrix& M, std::size_t j1, std::size_t j2, double c,
                    double s) {
  Scalar* a = M.col_data(j1);
  Scalar* b = M.col_data(j2);
  const std::size_t m = M.rows();
  for (std::size_t i = 0; i < m; ++i) {
    Scalar t1 = c * a[i] - s * b[i];
    b[i] = s * a[i] + c * b[i];
    a[i] = t1;
  }
}

void swap_columns(DenseMatrix& M, std::size_t j1, std::size_t j2) {
  Scalar* a = M.col_data(j1);
  Scalar* b = M.col_data(j2);
  for (std::size_t i = 0; i < M.rows(); ++i) std::swap(a[i], b[i]);
}

void scale_column(DenseMatrix& M, std::size_t j, Scalar factor) {
  Scalar* a = M.col_data(j);
  for (std::size_t i = 0; i < M.rows(); ++i) a[i] *= factor;
}

void create_givens(double a, double b, double* c, double* s) {
  if (b == 0.0) {
    *c = 1.0;
    *s = 0.0;
  } else if (std::fabs(b) > std::fabs(a)) {
    double t = -a / b;
    double s1 = 1.0 / std::sqrt(1.0 + t * t);
    *s = s1;
    *c = s1 * t;
  } else {
    double t = -b / a;
    double c1 = 1.0 / std::sqrt(1.0 + t * t);
    *c = c1;
    *s = c1 * t;
  }
}

void create_schur(double d0, double f0, double d1, double* c, double* s) {
  double apq = 2.0 * d0 * f0;
  if (apq != 0.0) {
    double t;
    double tau = (f0 * f0 + (d1 + d0) * (d1 - d0)) / apq;
    if (tau >= 0.0) {
      t = 1.0 / (tau + std::hypot(1.0, tau));
    } else {
      t = -1.0 / (-tau + std::hypot(1.0, tau));
    }
    *c = 1.0 / std::hypot(1.0, t);
    *s = t * (*c);
  } else {
    *c = 1.0;
    *s = 0.0;
  }
}

void chop_small_elements(double* d, double* f, std::size_t n) {
  double d_i = d[0];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double d_ip1 = d[i + 1];
    if (std::fabs(f[i]) < kEps * (std::fabs(d_i) + std::fabs(d_ip1)))
      f[i] = 0.0;
    d_i = d_ip1;
  }
}

double trailing_eigenvalue(const double* d, const double* f, std::size_t n) {
  double da = d[n - 2];
  double db = d[n - 1];
  double fa = (n > 2) ? f[n - 3] : 0.0;
  double fb = f[n - 2];
  double ta = da * da + fa * fa;
  double tb = db * db + fb * fb;
  double tab = da * fb;
  double dt = (ta - tb) / 2.0;
  if (dt >= 0.0) return tb - (tab * tab) / (dt + std::hypot(dt, tab));
  return tb + (tab * tab) / ((-dt) + std::hypot(dt, tab));
}

void svd2(double* d, double* f, DenseMatrix& U, DenseMatrix& V,
          std::size_t off) {
  double c, s;
  double d0 = d[0];
  double d1 = d[1];
  double f0 = f[0];

  if (d0 == 0.0) {
    create_givens(f0, d1, &c, &s);
    d[0] = c * f0 - s * d1;
    f[0] = s * f0 + c * d1;
    d[1] = 0.0;
    rotate_columns(U, off, off + 1, c, s);
    swap_columns(V, off, off + 1);
    return;
  }
  if (d1 == 0.0) {
    create_givens(d0, f0, &c, &s);
    d[0] = d0 * c - f0 * s;
    f[0] = 0.0;
    rotate_columns(V, off, off + 1, c, s);
    return;
  }

  create_schur(d0, f0, d1, &c, &s);
  double a11 = c * d0 - s * f0;
  double a21 = -s * d1;
  double a12 = s * d0 + c * f0;
  double a22 = c * d1;
  rotate_columns(V, off, off + 1, c, s);

  if (std::hypot(a11, a21) < std::hypot(a12, a22)) {
    std::swap(a11, a12);
    std::swap(a21, a22);
    swap_columns(V, off, off + 1);
  }
  create_givens(a11, a21, &c, &s);
  d[0] = c * a11 - s * a21;
  d[1] = s * a12 + c * a22;
  f[0] = c * a12 - s * a22;
  rotate_columns(U, off, off + 1, c, s);
}

void chase_out_intermediate_zero(double* d, double* f, std::size_t n,
                                 DenseMatrix& U, std::size_t off,
                                 std::size_t k0) {
  double c, s;
  double x = f[k0];
  double y = d[k0 + 1];

  for (std::size_t k = k0; k + 1 < n; ++k) {
    create_givens(y, -x, &c, &s);
    rotate_columns(U, off + k0, off + k + 1, c, s);
    d[k + 1] = s * x + c * y;
    if (k == k0) f[k] = c * x - s * y;
    if (k + 2 < n) {
      double z = f[k + 1];
      f[k + 1] = c * z;
      x = -s * z;
      y = d[k + 2];
    }
  }
}

void chase_out_trailing_zero(double* d, double* f, std::size_t n,
                             DenseMatrix& V, std::size_t off) {
  double c, s;
  double x = d[n - 2];
  double y = f[n - 2];

  for (std::size_t k = n - 1; k-- > 0;) {
    create_givens(x, y, &c, &s);
    rotate_columns(V, off + k, off + n - 1, c, s);
    d[k] = c * x - s * y;
    if (k == n - 2) f[k] = s * x + c * y;
    if (k > 0) {
      double z = f[k - 1];
      f[k - 1] = c * z;
      x = d[k - 1];
      y = s * z;
    }
  }
}

void qrstep(double* d, double* f, std::size_t n, DenseMatrix& U, DenseMatrix& V,
            std::size_t off) {
  if (n < 2) return;
  if (n == 2) {
    svd2(d, f, U, V, off);
    return;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      chase_out_intermediate_zero(d, f, n, U, off, i);
      return;
    }
  }
  if (d[n - 1] == 0.0) {
    chase_out_trailing_zero(d, f, n, V, off);
    return;
  }

  double y, z;
  double ak = 0.0, bk = 0.0, zk = 0.0, ap, bp, aq, bq;
  {
    double d0 = d[0];
    double f0 = f[0];
    double mu = trailing_eigenvalue(d, f, n);
    y = d0 * d0 - mu;
    z = d0 * f0;
    ap = d0;
    bp = f0;
    aq = d[1];
    bq = f[1];
    (void)bq;
  }

  for (std::size_t k = 0; k + 1 < n; ++k) {
    double c, s;
    create_givens(y, z, &c, &s);
    rotate_columns(V, off + k, off + k + 1, c, s);
    {
      double bk1 = c * bk - s * z;
      double ap1 = c * ap - s * bp;
      double bp1 = s * ap + c * bp;
      double zp1 = -s * aq;
      double aq1 = c * aq;
      if (k > 0) f[k - 1] = bk1;
      ak = ap1;
      bk = bp1;
      zk = zp1;
      ap = aq1;
      bp = (k + 2 < n) ? f[k + 1] : 0.0;
      y = ak;
      z = zk;
    }
    create_givens(y, z, &c, &s);
    rotate_columns(U, off + k, off + k + 1, c, s);
    {
      double ak1 = c * ak - s * zk;
      double bk1 = c * bk - s * ap;
      double zk1 = -s * bp;
      double ap1 = s * bk + c * ap;
      double bp1 = c * bp;
      d[k] = ak1;
      ak = ak1;
      bk = bk1;
      zk = zk1;
      ap = ap1;
      bp = bp1;
      aq = (k + 2 < n) ? d[k + 2] : 0.0;
      y = bk;
      z = zk;
    }
  }
  f[n - 2] = bk;
  d[n - 1] = ap;
}

// Reduces W (m >= n) to real bidiagonal d/e, accumulating the unitary
// factors so that A = U * B * V^H throughout.
void bidiagonalize(DenseMatrix& W, DenseMatrix& U, DenseMatrix& V,
                   std::vector<double>& d, std::vector<double>& e) {
  const std::size_t m = W.rows();
  const std::size_t n = W.cols();
  std::vector<Scalar> x;

  for (std::size_t k = 0; k < n; ++k) {
    // Column reflector on W(k:m, k).
    x.assign(m - k, Scalar(0.0, 0.0));
    for (std::size_t i = k; i < m; ++i) x[i - k] = W(i, k);
    Reflector h = make_reflector(x);
    d[k] = h.beta;
    W(k, k) = Scalar(h.beta, 0.0);
    for (std::size_t i = k + 1; i < m; ++i) W(i, k) = Scalar(0.0, 0.0);

    Scalar ctau = std::conj(h.tau);
    if (h.tau != Scalar(0.0, 0.0)) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Scalar* col = W.col_data(j);
        Scalar s(0.0, 0.0);
        for (std::size_t i = k; i < m; ++i) s += std::conj(h.v[i - k]) * col[i];
        s *= ctau;
        for (std::size_t i = k; i < m; ++i) col[i] -= h.v[i - k] * s;
      }
      // U <- U (I - tau v v^H)
      std::vector<Scalar> w(m, Scalar(0.0, 0.0));
      for (std::size_t j = k; j < m; ++j) {
        const Scalar* col = U.col_data(j);
        Scalar f = h.v[j - k];
        for (std::size_t i = 0; i < m; ++i) w[i] += col[i] * f;
      }
      for (std::size_t j = k; j < m; ++j) {
        Scalar* col = U.col_data(j);
        Scalar f = h.tau * std::conj(h.v[j - k]);
        for (std::size_t i = 0; i < m; ++i) col[i] -= w[i] * f;
      }
    }

    if (k + 1 >= n) continue;

    // Row reflector on W(k, k+1:n), built from the conjugated row so the
    // resulting superdiagonal entry is real.
    x.assign(n - k - 1, Scalar(0.0, 0.0));
    for (std::size_t j = k + 1; j < n; ++j) x[j - k - 1] = std::conj(W(k, j));
    Reflector g = make_reflector(x);
    e[k] = g.beta;
    W(k, k + 1) = Scalar(g.beta, 0.0);
    for (std::size_t j = k + 2; j < n; ++j) W(k, j) = Scalar(0.0, 0.0);

    if (g.tau != Scalar(0.0, 0.0)) {
      std::vector<Scalar> w(m - k - 1, Scalar(0.0, 0.0));
      for (std::size_t j = k + 1; j < n; ++j) {
        const Scalar* col = W.col_data(j);
        Scalar f = g.v[j - k - 1];
        for (std::size_t i = k + 1; i < m; ++i) w[i - k - 1] += col[i] * f;
      }
      for (std::size_t j = k + 1; j < n; ++j) {
        Scalar* col = W.col_data(j);
        Scalar f = g.tau * std::conj(g.v[j - k - 1]);
        for (std::size_t i = k + 1; i < m; ++i) col[i] -= w[i - k - 1] * f;
      }
      // V <- V (I - tau v v^H)
      const std::size_t nv = V.rows();
      std::vector<Scalar> wv(nv, Scalar(0.0, 0.0));
      for (std::size_t j = k + 1; j < n; ++j) {
        const Scalar* col = V.col_data(j);
        Scalar f = g.v[j - k - 1];
        for (std::size_t i = 0; i < nv; ++i) wv[i] += col[i] * f;
      }
      for (std::size_t j = k + 1; j < n; ++j) {
        Scalar* col = V.col_data(j);
        Scalar f = g.tau * std::conj(g.v[j - k - 1]);
        for (std::size_t i = 0; i < nv; ++i) col[i] -= wv[i] * f;
      }
    }
  }
}

// Core driver for m >= n; phases are canonicalized by the caller.
SvdFactorization svd_tall(const DenseMatrix& A) {
  const std::size_t m = A.rows();
  const std::size_t n = A.cols();

  SvdFactorization out;
  out.U = DenseMatrix::identity(m);
  out.V = DenseMatrix::identity(n);
  out.sigma.assign(n, 0.0);

  DenseMatrix W = A;
  std::vector<double> d(n, 0.0);
  std::vector<double> e(n > 0 ? n - 1 : 0, 0.0);
  bidiagonalize(W, out.U, out.V, d, e);

  if (n > 1) {
    chop_small_elements(d.data(), e.data(), n);
    std::size_t b = n - 1;
    std::size_t iterations = 0;
    const std::size_t budget = 100 * n + 100;
    while (b > 0) {
      if (e[b - 1] == 0.0) {
        --b;
        continue;
      }
      std::size_t a = b;
      while (a > 0 && e[a - 1] != 0.0) --a;
      if (++iterations > budget)
        throw Error(ErrorCode::NoConvergence, "bidiagonal QR sweep budget");
      const std::size_t nb = b - a + 1;
      qrstep(d.data() + a, e.data() + a, nb, out.U, out.V, a);
      chop_small_elements(d.data() + a, e.data() + a, nb);
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    if (d[j] < 0.0) {
      d[j] = -d[j];
      scale_column(out.V, j, Scalar(-1.0, 0.0));
    }
  }

  // Selection sort keeps ties in sweep order.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t imax = i;
    for (std::size_t j = i + 1; j < n; ++j)
      if (d[j] > d[imax]) imax = j;
    if (imax != i) {
      std::swap(d[i], d[imax]);
      swap_columns(out.U, i, imax);
      swap_columns(out.V, i, imax);
    }
  }

  out.sigma = d;
  return out;
}

void canonicalize_phases(SvdFactorization& f) {
  const std::size_t m = f.U.rows();
  const std::size_t n = f.V.rows();
  const std::size_t k = f.sigma.size();

  for (std::size_t j = 0; j < k; ++j) {
    std::size_t imax = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double a = std::abs(f.V(i, j));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (best == 0.0) continue;
    Scalar phase = f.V(imax, j) / best;
    Scalar factor = std::conj(phase);
    scale_column(f.V, j, factor);
    scale_column(f.U, j, factor);
  }
  // Unpaired trailing columns get a deterministic phase of their own.
  for (std::size_t j = k; j < m; ++j) {
    std::size_t imax = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double a = std::abs(f.U(i, j));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (best > 0.0) scale_column(f.U, j, std::conj(f.U(imax, j) / best));
  }
  for (std::size_t j = k; j < n; ++j) {
    std::size_t imax = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double a = std::abs(f.V(i, j));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (best > 0.0) scale_column(f.V, j, std::conj(f.V(imax, j) / best));
  }
}

}  // namespace

DenseMatrix SvdFactorization::reconstruct() const {
  const std::size_t m = U.rows();
  const std::size_t n = V.rows();
  DenseMatrix scaled(m, sigma.size());
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    const Scalar* src = U.col_data(j);
    Scalar* dst = scaled.col_data(j);
    for (std::size_t i = 0; i < m; ++i) dst[i] = src[i] * sigma[j];
  }
  DenseMatrix result(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    Scalar* out = result.col_data(j);
    for (std::size_t kk = 0; kk < sigma.size(); ++kk) {
      Scalar f = std::conj(V(j, kk));
      const Scalar* col = scaled.col_data(kk);
      for (std::size_t i = 0; i < m; ++i) out[i] += col[i] * f;
    }
  }
  return result;
}

SvdFactorization svd(const DenseMatrix& A) {
  if (A.rows() == 0 || A.cols() == 0)
    throw Error(ErrorCode::InvalidArgument, "svd of empty matrix");
  require_finite(A, "svd");

  SvdFactorization f;
  if (A.rows() >= A.cols()) {
    f = svd_tall(A);
  } else {
    SvdFactorization t = svd_tall(A.hermitian());
    f.U = std::move(t.V);
    f.V = std::move(t.U);
    f.sigma = std::move(t.sigma);
  }
  canonicalize_phases(f);
  return f;
}

double spectral_norm(const DenseMatrix& A) {
  require_finite(A, "spectral_norm");
  SvdFactorization f = svd(A);
  return f.sigma.empty() ? 0.0 : f.sigma.front();
}

double pair_norm(const DenseMatrix& A, const DenseVector& b) {
  if (A.rows() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "pair_norm rows(A) != len(b)");
  return std::hypot(spectral_norm(A), b.norm());
}

}  // namespace grasslin
