// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#include "specradius/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specradius/errors.hpp"

namespace specradius {

namespace {

constexpr double kInnerProductFloor = 1e-12;

void check_finite_square(const Matrix& m) {
  if (m.rows() != m.cols()) {
    raise(ErrorCode::ShapeMismatch, "matrix must be square for an eigendecomposition");
  }
  if (m.size() == 0) {
    raise(ErrorCode::InvalidArgument, "matrix must be nonempty");
  }
  if (!m.allFinite()) {
    raise(ErrorCode::InvalidArgument, "matrix contains non-finite entries");
  }
}

}  // namespace

std::pair<ComplexVector, ComplexVector> rp_compatible_pair(const ComplexVector& x,
                                                           const ComplexVector& y) {
  const double nx = x.norm();
  const double ny = y.norm();
  if (nx == 0.0 || ny == 0.0) {
    raise(ErrorCode::InvalidArgument, "eigenvectors must be nonzero");
  }
  ComplexVector xs = x / nx;
  ComplexVector ys = y / ny;
  const Complex inner = ys.adjoint() * xs;  // y^* x
  const double mag = std::abs(inner);
  if (mag < kInnerProductFloor) {
    raise(ErrorCode::IllConditionedEigenpair,
          "|y^*x| = " + std::to_string(mag) + " below 1e-12; eigenvalue is defective or nearly so");
  }
  // (c y)^* x = conj(c) y^* x = |y^*x| when c = (y^*x)/|y^*x|.
  ys *= inner / mag;
  return {std::move(xs), std::move(ys)};
}

namespace {

/// Fast eigenvector pair for one eigenvalue: inverse iteration on the shifted
/// matrix and its adjoint off one LU factorization. Returns false when the
/// iterates do not certify the residual and conditioning bounds (multiple or
/// defective eigenvalues), in which case the caller takes the SVD path.
bool inverse_iteration_pair(const ComplexMatrix& shifted, double residual_bound,
                            ComplexVector& x, ComplexVector& y) {
  const Eigen::Index n = shifted.rows();
  Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
  // fixed start with no alignment to any particular basis
  ComplexVector seed(n);
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  for (Eigen::Index k = 0; k < n; ++k) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    const double re = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    const double im = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
    seed(k) = Complex(1.0 + re, im);
  }
  x = seed.normalized();
  y = x;
  for (int it = 0; it < 3; ++it) {
    ComplexVector xn = lu.solve(x);
    ComplexVector yn = lu.adjoint().solve(y);
    if (!xn.allFinite() || !yn.allFinite()) return false;
    const double nx = xn.norm();
    const double ny = yn.norm();
    if (nx == 0.0 || ny == 0.0) return false;
    x = xn / nx;
    y = yn / ny;
  }
  if ((shifted * x).norm() > residual_bound) return false;
  if ((y.adjoint() * shifted).norm() > residual_bound) return false;
  return std::abs((y.adjoint() * x).value()) >= 1e-8;
}

}  // namespace

std::vector<EigenTriple> rightmost_eigentriples(const Matrix& m, double tie_tol,
                                                int max_triples) {
  check_finite_square(m);
  if (tie_tol < 0.0) {
    raise(ErrorCode::InvalidArgument, "tie_tol must be nonnegative");
  }
  const Eigen::Index n = m.rows();

  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    raise(ErrorCode::EigenFailure, "QR iteration did not converge");
  }
  const ComplexVector eigenvalues = solver.eigenvalues();

  const double scale = std::max(1.0, eigenvalues.cwiseAbs().maxCoeff());
  const double remax = eigenvalues.real().maxCoeff();
  const double gap = tie_tol * scale;

  // Rightmost candidates, conjugate pairs collapsed to their upper-half member,
  // coincident values merged.
  std::vector<Complex> candidates;
  const double merge_tol = std::max(gap, 64.0 * std::numeric_limits<double>::epsilon() * scale);
  for (Eigen::Index k = 0; k < n; ++k) {
    Complex lambda = eigenvalues(k);
    if (lambda.real() < remax - gap) continue;
    if (lambda.imag() < 0.0) lambda = std::conj(lambda);
    bool duplicate = false;
    for (const Complex& seen : candidates) {
      if (std::abs(lambda - seen) <= merge_tol) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) candidates.push_back(lambda);
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Complex& a, const Complex& b) { return a.imag() > b.imag(); });

  if (max_triples > 0 && candidates.size() > static_cast<std::size_t>(max_triples)) {
    candidates.resize(static_cast<std::size_t>(max_triples));
  }

  const double residual_bound = 1e-8 * m.norm();
  std::vector<EigenTriple> triples;
  triples.reserve(candidates.size());
  for (const Complex& lambda : candidates) {
    ComplexMatrix shifted = m.cast<Complex>();
    shifted.diagonal().array() -= lambda;

    ComplexVector xv, yv;
    if (!inverse_iteration_pair(shifted, residual_bound, xv, yv)) {
      // Null vectors of (m - lambda I): the trailing singular vectors solve
      // (m - lambda I) x = 0 and y^*(m - lambda I) = 0. For a multiple
      // eigenvalue the null spaces have several dimensions and the SVD pairs
      // their bases arbitrarily, so pick the pair across the whole cluster
      // that maximizes |y^* x|; only a defective eigenvalue leaves every
      // pairing orthogonal.
      Eigen::BDCSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const double residual = svd.singularValues()(n - 1);
      if (residual > residual_bound) {
        raise(ErrorCode::EigenFailure, "eigenvalue residual " + std::to_string(residual) +
                                           " exceeds 1e-8 * |A|_F");
      }
      Eigen::Index cluster = 1;
      while (cluster < n && svd.singularValues()(n - 1 - cluster) <= residual_bound) ++cluster;
      if (cluster == 1) {
        xv = svd.matrixV().col(n - 1);
        yv = svd.matrixU().col(n - 1);
      } else {
        const ComplexMatrix u_cluster = svd.matrixU().rightCols(cluster);
        const ComplexMatrix v_cluster = svd.matrixV().rightCols(cluster);
        const ComplexMatrix overlap = u_cluster.adjoint() * v_cluster;
        Eigen::BDCSVD<ComplexMatrix> pairing(overlap,
                                             Eigen::ComputeFullU | Eigen::ComputeFullV);
        yv = u_cluster * pairing.matrixU().col(0);
        xv = v_cluster * pairing.matrixV().col(0);
      }
    }
    auto [x, y] = rp_compatible_pair(xv, yv);
    EigenTriple triple;
    triple.lambda = lambda;
    triple.inner = (y.adjoint() * x).value().real();
    triple.x = std::move(x);
    triple.y = std::move(y);
    triples.push_back(std::move(triple));
  }
  return triples;
}

Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    raise(ErrorCode::ShapeMismatch, "frobenius_inner requires identical shapes");
  }
  return (a.adjoint() * b).trace();
}

double frobenius_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    raise(ErrorCode::ShapeMismatch, "frobenius_inner requires identical shapes");
  }
  return a.cwiseProduct(b).sum();
}

Vector singular_values(const Matrix& m) {
  if (!m.allFinite()) {
    raise(ErrorCode::InvalidArgument, "matrix contains non-finite entries");
  }
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues();
}

Vector singular_values(const ComplexMatrix& m) {
  if (!m.allFinite()) {
    raise(ErrorCode::InvalidArgument, "matrix contains non-finite entries");
  }
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

double spectral_norm(const Matrix& m) { return singular_values(m)(0); }

}  // namespace specradius
