// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPECRADIUS_LINALG_HPP
#define SPECRADIUS_LINALG_HPP

#include <utility>
#include <vector>

#include "specradius/types.hpp"

namespace specradius {

inline constexpr double kDefaultTieTol = 1e-8;

/// Eigenvalue with unit-norm right/left eigenvectors scaled so that y^* x is
/// real and strictly positive.
struct EigenTriple {
  Complex lambda;
  ComplexVector x;  // right eigenvector, |x| = 1
  ComplexVector y;  // left eigenvector, |y| = 1, y^*(A - lambda I) = 0
  double inner = 0.0;  // y^* x, real positive

  /// Re(y x^*), the gradient of the spectral abscissa up to the 1/(y^*x) factor.
  Matrix gradient_matrix() const { return (y * x.adjoint()).real(); }
};

/// Rescales (x, y) to unit norms with real positive y^* x. The right vector is
/// returned as x/|x| exactly; only the left vector's phase is rotated.
/// Throws IllConditionedEigenpair when |y^*x|/(|x||y|) < 1e-12.
std::pair<ComplexVector, ComplexVector> rp_compatible_pair(const ComplexVector& x,
                                                           const ComplexVector& y);

/// All eigenvalues of m whose real part lies within tie_tol * max(1, max|lambda|)
/// of the maximum, each with its eigenvector pair. Of each conjugate pair only
/// the member with Im >= 0 is kept; coincident values are merged. Sorted by
/// descending imaginary part. max_triples > 0 keeps only the leading entries
/// of that order.
std::vector<EigenTriple> rightmost_eigentriples(const Matrix& m, double tie_tol = kDefaultTieTol,
                                                int max_triples = 0);

/// Tr(a^* b) = sum conj(a_ij) b_ij.
Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b);
double frobenius_inner(const Matrix& a, const Matrix& b);

/// Full singular spectrum, nonnegative, descending.
Vector singular_values(const Matrix& m);
Vector singular_values(const ComplexMatrix& m);

/// Largest singular value.
double spectral_norm(const Matrix& m);

}  // namespace specradius

#endif  // SPECRADIUS_LINALG_HPP
