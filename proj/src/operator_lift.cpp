#include "grasslin/operator_lift.hpp"

#include <cmath>

#include "grasslin/random.hpp"

namespace grasslin {

SpaceDescriptor SpaceDescriptor::vector_space(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty vector space");
  return SpaceDescriptor(Kind::VectorSpace, n, 1);
}

SpaceDescriptor SpaceDescriptor::matrix_space(std::size_t rows,
                                              std::size_t cols) {
  if (rows == 0 || cols == 0)
    throw Error(ErrorCode::InvalidArgument, "empty matrix space");
  return SpaceDescriptor(Kind::MatrixSpace, rows, cols);
}

SpaceDescriptor SpaceDescriptor::poly_space(std::size_t max_degree) {
  return SpaceDescriptor(Kind::UnivariatePolySpace, max_degree + 1, 1);
}

std::size_t total_dim(const Shape& shape) {
  std::size_t total = 0;
  for (const SpaceDescriptor& d : shape) total += d.coordinate_dim();
  return total;
}

StructuredElement make_element(const Shape& shape,
                               std::vector<DenseMatrix> parts) {
  StructuredElement e{shape, std::move(parts)};
  require_conforming(e, shape, "make_element");
  return e;
}

void require_conforming(const StructuredElement& e, const Shape& shape,
                        const char* where) {
  if (e.shape.size() != shape.size() || e.parts.size() != shape.size())
    throw Error(ErrorCode::ShapeMismatch, where);
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (!(e.shape[i] == shape[i]))
      throw Error(ErrorCode::ShapeMismatch, where);
    if (e.parts[i].rows() != shape[i].rows() ||
        e.parts[i].cols() != shape[i].cols())
      throw Error(ErrorCode::ShapeMismatch, where);
  }
}

DenseVector pack(const StructuredElement& e) {
  require_conforming(e, e.shape, "pack");
  DenseVector out(total_dim(e.shape));
  std::size_t at = 0;
  for (const DenseMatrix& part : e.parts)
    for (std::size_t j = 0; j < part.cols(); ++j)
      for (std::size_t i = 0; i < part.rows(); ++i) out[at++] = part(i, j);
  return out;
}

StructuredElement unpack(const DenseVector& v, const Shape& shape) {
  if (v.size() != total_dim(shape))
    throw Error(ErrorCode::LengthMismatch,
                "coordinate length " + std::to_string(v.size()) +
                    " does not match shape dimension " +
                    std::to_string(total_dim(shape)));
  StructuredElement e;
  e.shape = shape;
  std::size_t at = 0;
  for (const SpaceDescriptor& d : shape) {
    DenseMatrix part(d.rows(), d.cols());
    for (std::size_t j = 0; j < d.cols(); ++j)
      for (std::size_t i = 0; i < d.rows(); ++i) part(i, j) = v[at++];
    e.parts.push_back(std::move(part));
  }
  return e;
}

namespace {

DenseVector apply_packed(const LinearOperator& L, const DenseVector& coords) {
  StructuredElement out = L.apply(unpack(coords, L.domain));
  require_conforming(out, L.codomain, "operator output");
  return pack(out);
}

void check_linearity(const LinearOperator& L) {
  const std::size_t dim = total_dim(L.domain);
  Rng rng(0x6c696e65617200ULL);
  for (int probe = 0; probe < 20; ++probe) {
    DenseVector x = rng.vector(dim);
    DenseVector y = rng.vector(dim);
    Scalar alpha = rng.complex_gaussian();

    DenseVector lx = apply_packed(L, x);
    DenseVector ly = apply_packed(L, y);
    DenseVector lsum = apply_packed(L, x + y);
    DenseVector lscaled = apply_packed(L, alpha * x);

    double scale = std::max({1.0, lx.norm(), ly.norm(), lsum.norm()});
    if ((lsum - lx - ly).norm() > 1e-10 * scale)
      throw Error(ErrorCode::NonlinearOperator, "additivity probe failed");
    if ((lscaled - alpha * lx).norm() >
        1e-10 * std::max(scale, lscaled.norm()))
      throw Error(ErrorCode::NonlinearOperator, "homogeneity probe failed");
  }
}

}  // namespace

Materialization materialize(const LinearOperator& L) {
  check_linearity(L);
  const std::size_t dn = total_dim(L.domain);
  const std::size_t dm = total_dim(L.codomain);
  Materialization mat;
  mat.domain = L.domain;
  mat.codomain = L.codomain;
  mat.matrix = DenseMatrix(dm, dn);
  for (std::size_t j = 0; j < dn; ++j) {
    DenseVector image = apply_packed(L, DenseVector::unit(dn, j));
    mat.matrix.set_column(j, image);
  }
  return mat;
}

OperatorSolution solve_operator(const LinearOperator& L,
                                const StructuredElement& rhs,
                                const SolverConfig& cfg) {
  require_conforming(rhs, L.codomain, "solve_operator rhs");
  Materialization mat = materialize(L);
  GeneralSolution solution = solve_general(mat.matrix, pack(rhs), cfg);

  OperatorSolution out;
  out.report = solution.report;
  if (!solution.is_empty()) {
    out.anchor = unpack(solution.affine->anchor, L.domain);
    const DenseMatrix& basis = solution.affine->kernel.basis();
    for (std::size_t j = 0; j < basis.cols(); ++j)
      out.kernel_basis.push_back(unpack(basis.column(j), L.domain));
  }
  return out;
}

}  // namespace grasslin
