#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "grasslin/error.hpp"

namespace grasslin {

// All computation runs over complex double precision; real inputs are
// promoted on construction.
using Scalar = std::complex<double>;

class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t n) : entries_(n, Scalar(0.0, 0.0)) {}
  DenseVector(std::initializer_list<Scalar> init) : entries_(init) {}

  static DenseVector from_real(const std::vector<double>& values);
  static DenseVector zero(std::size_t n) { return DenseVector(n); }
  static DenseVector unit(std::size_t n, std::size_t index);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  Scalar& operator[](std::size_t i) { return entries_[i]; }
  const Scalar& operator[](std::size_t i) const { return entries_[i]; }

  Scalar* data() { return entries_.data(); }
  const Scalar* data() const { return entries_.data(); }

  double norm() const;
  double norm1() const;
  double max_abs() const;
  bool is_finite() const;

  DenseVector& operator+=(const DenseVector& rhs);
  DenseVector& operator-=(const DenseVector& rhs);
  DenseVector& operator*=(Scalar factor);

 private:
  std::vector<Scalar> entries_;
};

DenseVector operator+(DenseVector lhs, const DenseVector& rhs);
DenseVector operator-(DenseVector lhs, const DenseVector& rhs);
DenseVector operator*(Scalar factor, DenseVector v);

// Hermitian inner product, conjugate-linear in the first argument.
Scalar inner(const DenseVector& x, const DenseVector& y);

// Column-major dense complex matrix with immutable dimensions.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Scalar(0.0, 0.0)) {}

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix zero(std::size_t rows, std::size_t cols) {
    return DenseMatrix(rows, cols);
  }
  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<Scalar>> rows);
  static DenseMatrix from_real_rows(const std::vector<std::vector<double>>& rows);
  static DenseMatrix from_columns(const std::vector<DenseVector>& columns);
  static DenseMatrix diagonal(const std::vector<double>& values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const {
    return data_[j * rows_ + i];
  }

  Scalar* col_data(std::size_t j) { return data_.data() + j * rows_; }
  const Scalar* col_data(std::size_t j) const { return data_.data() + j * rows_; }

  DenseMatrix hermitian() const;
  DenseVector column(std::size_t j) const;
  void set_column(std::size_t j, const DenseVector& v);
  DenseMatrix columns(std::size_t first, std::size_t count) const;

  double frobenius_norm() const;
  double max_abs() const;
  bool is_finite() const;

  DenseMatrix& operator+=(const DenseMatrix& rhs);
  DenseMatrix& operator-=(const DenseMatrix& rhs);
  DenseMatrix& operator*=(Scalar factor);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator*(Scalar factor, DenseMatrix rhs);
DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs);
DenseVector operator*(const DenseMatrix& lhs, const DenseVector& rhs);

void require_finite(const DenseMatrix& value, const char* where);
void require_finite(const DenseVector& value, const char* where);
void require_same_length(const DenseVector& a, const DenseVector& b,
                         const char* where);

}  // namespace grasslin
