#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "grasslin/general_solver.hpp"

namespace grasslin {

// Coordinate space for one slot of a structured element: column vectors,
// matrices (column-major coordinates), or univariate polynomials stored as
// ascending-degree coefficient columns.
class SpaceDescriptor {
 public:
  enum class Kind { VectorSpace, MatrixSpace, UnivariatePolySpace };

  static SpaceDescriptor vector_space(std::size_t n);
  static SpaceDescriptor matrix_space(std::size_t rows, std::size_t cols);
  static SpaceDescriptor poly_space(std::size_t max_degree);

  Kind kind() const { return kind_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t max_degree() const { return rows_ - 1; }
  std::size_t coordinate_dim() const { return rows_ * cols_; }

  bool operator==(const SpaceDescriptor& other) const = default;

 private:
  SpaceDescriptor(Kind kind, std::size_t rows, std::size_t cols)
      : kind_(kind), rows_(rows), cols_(cols) {}

  Kind kind_;
  std::size_t rows_;
  std::size_t cols_;
};

using Shape = std::vector<SpaceDescriptor>;

std::size_t total_dim(const Shape& shape);

// Value blocks conforming to a shape; vector and polynomial parts are
// single-column matrices.
struct StructuredElement {
  Shape shape;
  std::vector<DenseMatrix> parts;
};

StructuredElement make_element(const Shape& shape,
                               std::vector<DenseMatrix> parts);
void require_conforming(const StructuredElement& e, const Shape& shape,
                        const char* where);

struct LinearOperator {
  Shape domain;
  Shape codomain;
  std::function<StructuredElement(const StructuredElement&)> apply;
};

// Coordinate isomorphism: matrix blocks column-major, polynomials by
// ascending degree, parts concatenated in shape order.
DenseVector pack(const StructuredElement& e);
StructuredElement unpack(const DenseVector& v, const Shape& shape);

struct Materialization {
  DenseMatrix matrix;  // total codomain dim x total domain dim
  Shape domain;
  Shape codomain;
};

// Applies the operator to the canonical basis after a randomized
// additivity/homogeneity check of the user closure.
Materialization materialize(const LinearOperator& L);

struct OperatorSolution {
  std::optional<StructuredElement> anchor;
  std::vector<StructuredElement> kernel_basis;
  SolveReport report;

  bool is_empty() const { return !anchor.has_value(); }
};

OperatorSolution solve_operator(const LinearOperator& L,
                                const StructuredElement& rhs,
                                const SolverConfig& cfg);

}  // namespace grasslin
