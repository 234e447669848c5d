#include "grasslin/dense.hpp"

#include <algorithm>
#include <cmath>

namespace grasslin {

namespace {

bool finite_scalar(const Scalar& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ThetaOnSingularValue: return "ThetaOnSingularValue";
    case ErrorCode::BackwardErrorOnTheta: return "BackwardErrorOnTheta";
    case ErrorCode::DegenerateColumn: return "DegenerateColumn";
    case ErrorCode::ZeroRank: return "ZeroRank";
    case ErrorCode::InconsistentSystem: return "InconsistentSystem";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::IncomparableDimensions: return "IncomparableDimensions";
    case ErrorCode::SingularAugmentedSystem: return "SingularAugmentedSystem";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::ZeroRhs: return "ZeroRhs";
    case ErrorCode::NonlinearOperator: return "NonlinearOperator";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InconsistentRowLength: return "InconsistentRowLength";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

DenseVector DenseVector::from_real(const std::vector<double>& values) {
  DenseVector v(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) v[i] = Scalar(values[i], 0.0);
  return v;
}

DenseVector DenseVector::unit(std::size_t n, std::size_t index) {
  DenseVector v(n);
  v[index] = Scalar(1.0, 0.0);
  return v;
}

double DenseVector::norm() const {
  // Two-pass scaled norm, safe against overflow for the magnitudes met here.
  double maxabs = max_abs();
  if (maxabs == 0.0) return 0.0;
  double sum = 0.0;
  for (const Scalar& z : entries_) {
    double re = z.real() / maxabs;
    double im = z.imag() / maxabs;
    sum += re * re + im * im;
  }
  return maxabs * std::sqrt(sum);
}

double DenseVector::norm1() const {
  double sum = 0.0;
  for (const Scalar& z : entries_) sum += std::abs(z);
  return sum;
}

double DenseVector::max_abs() const {
  double m = 0.0;
  for (const Scalar& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

bool DenseVector::is_finite() const {
  for (const Scalar& z : entries_)
    if (!finite_scalar(z)) return false;
  return true;
}

DenseVector& DenseVector::operator+=(const DenseVector& rhs) {
  require_same_length(*this, rhs, "vector addition");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs[i];
  return *this;
}

DenseVector& DenseVector::operator-=(const DenseVector& rhs) {
  require_same_length(*this, rhs, "vector subtraction");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs[i];
  return *this;
}

DenseVector& DenseVector::operator*=(Scalar factor) {
  for (Scalar& z : entries_) z *= factor;
  return *this;
}

DenseVector operator+(DenseVector lhs, const DenseVector& rhs) {
  lhs += rhs;
  return lhs;
}

DenseVector operator-(DenseVector lhs, const DenseVector& rhs) {
  lhs -= rhs;
  return lhs;
}

DenseVector operator*(Scalar factor, DenseVector v) {
  v *= factor;
  return v;
}

Scalar inner(const DenseVector& x, const DenseVector& y) {
  require_same_length(x, y, "inner product");
  Scalar sum(0.0, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) sum += std::conj(x[i]) * y[i];
  return sum;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1.0, 0.0);
  return m;
}

DenseMatrix DenseMatrix::from_rows(
    std::initializer_list<std::initializer_list<Scalar>> rows) {
  std::size_t m = rows.size();
  std::size_t n = m == 0 ? 0 : rows.begin()->size();
  DenseMatrix result(m, n);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != n)
      throw Error(ErrorCode::DimensionMismatch, "ragged row initializer");
    std::size_t j = 0;
    for (const Scalar& z : row) result(i, j++) = z;
    ++i;
  }
  return result;
}

DenseMatrix DenseMatrix::from_real_rows(
    const std::vector<std::vector<double>>& rows) {
  std::size_t m = rows.size();
  std::size_t n = m == 0 ? 0 : rows.front().size();
  DenseMatrix result(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != n)
      throw Error(ErrorCode::DimensionMismatch, "ragged row initializer");
    for (std::size_t j = 0; j < n; ++j) result(i, j) = Scalar(rows[i][j], 0.0);
  }
  return result;
}

DenseMatrix DenseMatrix::from_columns(const std::vector<DenseVector>& columns) {
  std::size_t n = columns.size();
  std::size_t m = n == 0 ? 0 : columns.front().size();
  DenseMatrix result(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (columns[j].size() != m)
      throw Error(ErrorCode::DimensionMismatch, "ragged column list");
    result.set_column(j, columns[j]);
  }
  return result;
}

DenseMatrix DenseMatrix::diagonal(const std::vector<double>& values) {
  DenseMatrix result(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    result(i, i) = Scalar(values[i], 0.0);
  return result;
}

DenseMatrix DenseMatrix::hermitian() const {
  DenseMatrix result(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i)
      result(j, i) = std::conj((*this)(i, j));
  return result;
}

DenseVector DenseMatrix::column(std::size_t j) const {
  DenseVector v(rows_);
  const Scalar* src = col_data(j);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = src[i];
  return v;
}

void DenseMatrix::set_column(std::size_t j, const DenseVector& v) {
  if (v.size() != rows_)
    throw Error(ErrorCode::DimensionMismatch, "set_column length");
  Scalar* dst = col_data(j);
  for (std::size_t i = 0; i < rows_; ++i) dst[i] = v[i];
}

DenseMatrix DenseMatrix::columns(std::size_t first, std::size_t count) const {
  DenseMatrix result(rows_, count);
  for (std::size_t j = 0; j < count; ++j) {
    const Scalar* src = col_data(first + j);
    Scalar* dst = result.col_data(j);
    std::copy(src, src + rows_, dst);
  }
  return result;
}

double DenseMatrix::frobenius_norm() const {
  double maxabs = max_abs();
  if (maxabs == 0.0) return 0.0;
  double sum = 0.0;
  for (const Scalar& z : data_) {
    double re = z.real() / maxabs;
    double im = z.imag() / maxabs;
    sum += re * re + im * im;
  }
  return maxabs * std::sqrt(sum);
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (const Scalar& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool DenseMatrix::is_finite() const {
  for (const Scalar& z : data_)
    if (!finite_scalar(z)) return false;
  return true;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw Error(ErrorCode::DimensionMismatch, "matrix addition");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw Error(ErrorCode::DimensionMismatch, "matrix subtraction");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(Scalar factor) {
  for (Scalar& z : data_) z *= factor;
  return *this;
}

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs) {
  lhs += rhs;
  return lhs;
}

DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs) {
  lhs -= rhs;
  return lhs;
}

DenseMatrix operator*(Scalar factor, DenseMatrix rhs) {
  rhs *= factor;
  return rhs;
}

DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs) {
  if (lhs.cols() != rhs.rows())
    throw Error(ErrorCode::DimensionMismatch, "matrix product");
  DenseMatrix result(lhs.rows(), rhs.cols());
  const std::size_t m = lhs.rows();
  for (std::size_t j = 0; j < rhs.cols(); ++j) {
    Scalar* out = result.col_data(j);
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      Scalar f = rhs(k, j);
      if (f == Scalar(0.0, 0.0)) continue;
      const Scalar* col = lhs.col_data(k);
      for (std::size_t i = 0; i < m; ++i) out[i] += col[i] * f;
    }
  }
  return result;
}

DenseVector operator*(const DenseMatrix& lhs, const DenseVector& rhs) {
  if (lhs.cols() != rhs.size())
    throw Error(ErrorCode::DimensionMismatch, "matrix-vector product");
  DenseVector result(lhs.rows());
  for (std::size_t k = 0; k < lhs.cols(); ++k) {
    Scalar f = rhs[k];
    if (f == Scalar(0.0, 0.0)) continue;
    const Scalar* col = lhs.col_data(k);
    for (std::size_t i = 0; i < lhs.rows(); ++i) result[i] += col[i] * f;
  }
  return result;
}

void require_finite(const DenseMatrix& value, const char* where) {
  if (!value.is_finite())
    throw Error(ErrorCode::NonFinite, std::string("matrix entries in ") + where);
}

void require_finite(const DenseVector& value, const char* where) {
  if (!value.is_finite())
    throw Error(ErrorCode::NonFinite, std::string("vector entries in ") + where);
}

void require_same_length(const DenseVector& a, const DenseVector& b,
                         const char* where) {
  if (a.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch, where);
}

}  // namespace grasslin
