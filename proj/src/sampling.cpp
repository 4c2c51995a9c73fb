// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#include "specradius/sampling.hpp"

#include <algorithm>

#include "specradius/errors.hpp"

namespace specradius {

SpectrumCloud sample_pseudospectrum(const Matrix& a, const StructurePtr& structure,
                                    double epsilon, int n_samples, std::uint64_t seed) {
  if (a.rows() != a.cols() || !a.allFinite()) {
    raise(ErrorCode::InvalidArgument, "system matrix must be square and finite");
  }
  if (structure->n != a.rows()) {
    raise(ErrorCode::ShapeMismatch, "structure dimension does not match the system matrix");
  }
  if (n_samples < 1) {
    raise(ErrorCode::InvalidArgument, "n_samples must be at least 1");
  }

  SpectrumCloud cloud;
  cloud.epsilon = epsilon;
  cloud.sample_count = n_samples;
  cloud.seed = seed;
  cloud.points.reserve(static_cast<std::size_t>(n_samples) * static_cast<std::size_t>(a.rows()));

  for (int s = 0; s < n_samples; ++s) {
    const SparsePerturbation delta =
        sample_feasible(structure, epsilon, seed + static_cast<std::uint64_t>(s));
    Matrix perturbed = a;
    delta.add_to(perturbed);
    Eigen::EigenSolver<Matrix> solver(perturbed, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
      cloud.failed_samples.push_back(s);
      continue;
    }
    const ComplexVector eigenvalues = solver.eigenvalues();
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
      cloud.points.push_back({eigenvalues(k).real(), eigenvalues(k).imag(), s});
    }
  }
  return cloud;
}

double sampled_abscissa(const SpectrumCloud& cloud) {
  if (cloud.points.empty()) {
    raise(ErrorCode::EmptyCloud, "spectrum cloud has no points");
  }
  double best = cloud.points.front().re;
  for (const auto& p : cloud.points) best = std::max(best, p.re);
  return best;
}

}  // namespace specradius
