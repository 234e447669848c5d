#pragma once

#include <iosfwd>
#include <string>

#include "grasslin/dense.hpp"

namespace grasslin {

// Reads MatrixMarket (array/coordinate; real, integer or complex; general,
// symmetric, hermitian or skew-symmetric) or a plain whitespace grid whose
// entries are written `a`, `a+bi` or `a-bi` with no internal spaces.
// Parse failures carry "line L, column C" in the message.
DenseMatrix parse_matrix_file(const std::string& path);
DenseMatrix parse_matrix_stream(std::istream& in, const std::string& name);

// Vectors are n x 1 matrices.
DenseVector parse_vector_file(const std::string& path);

// MatrixMarket array output, complex field only when needed; 17 significant
// digits for a lossless double round-trip.
void write_matrix_file(const std::string& path, const DenseMatrix& A);
void write_vector_file(const std::string& path, const DenseVector& v);

// `re+imi` with 17 significant digits.
std::string format_complex(const Scalar& z);
Scalar parse_complex_token(const std::string& token);

std::string format_double(double value);

}  // namespace grasslin
