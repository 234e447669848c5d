#pragma once

#include <utility>

#include "grasslin/factor.hpp"

namespace grasslin {

// Element of the Grassmannian G_k(C^n): an orthonormal-column basis.
// k = 0 (the trivial subspace) is allowed.
class Subspace {
 public:
  // Validates orthonormality (||B^H B - I|| <= 1e-12 entrywise scaled).
  static Subspace from_orthonormal(DenseMatrix basis);
  // Orthonormalizes arbitrary independent columns; DegenerateColumn if not.
  static Subspace orthonormalize(const DenseMatrix& spanning);
  static Subspace trivial(std::size_t ambient_dim);

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return basis_.cols(); }
  const DenseMatrix& basis() const { return basis_; }

  // Orthogonal projection of x onto the subspace.
  DenseVector project(const DenseVector& x) const;
  // x minus its projection.
  DenseVector reject(const DenseVector& x) const;

 private:
  Subspace(std::size_t ambient, DenseMatrix basis)
      : ambient_dim_(ambient), basis_(std::move(basis)) {}

  std::size_t ambient_dim_;
  DenseMatrix basis_;
};

// dist(P, Q) = || P P^H - Q Q^H ||_2; defined for equal index only.
double grassmann_distance(const Subspace& P, const Subspace& Q);

// Affine subspace anchor + span(kernel) with the anchor being the unique
// minimum-norm representative (anchor orthogonal to the kernel).
struct AffineSolution {
  DenseVector anchor;
  Subspace kernel;

  std::size_t ambient_dim() const { return kernel.ambient_dim(); }
  std::size_t dim() const { return kernel.dim(); }
};

// Minimum-norm representative of point + V.
AffineSolution canonicalize_affine(const DenseVector& point, const Subspace& V);

// max{ ||anchor_1 - anchor_2||_2, dist(V_1, V_2) }.
double affine_distance(const AffineSolution& s1, const AffineSolution& s2);

// Distance between the exact solution sets of two consistent equal-rank
// systems: max{ ||A^+ b - B^+ d||_2, dist(Kernel A, Kernel B) }.
double solution_distance(const DenseMatrix& A, const DenseVector& b,
                         const DenseMatrix& B, const DenseVector& d);

// Point of the affine set closest to `target`, plus its kernel coordinates.
std::pair<DenseVector, DenseVector> nearest_in_affine(const AffineSolution& S,
                                                      const DenseVector& target);

}  // namespace grasslin
