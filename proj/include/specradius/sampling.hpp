// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPECRADIUS_SAMPLING_HPP
#define SPECRADIUS_SAMPLING_HPP

#include <cstdint>
#include <vector>

#include "specradius/perturbation.hpp"
#include "specradius/types.hpp"

namespace specradius {

/// Eigenvalues of A + Delta collected over random feasible draws. Sample k is
/// drawn with seed base_seed + k, so any recorded point can be re-derived.
struct SpectrumCloud {
  struct Point {
    double re;
    double im;
    int sample_index;
  };
  std::vector<Point> points;
  double epsilon = 0.0;
  int sample_count = 0;
  std::uint64_t seed = 0;
  std::vector<int> failed_samples;  // eigensolver failures, recorded not fatal
};

/// Monte-Carlo spectrum estimate: n_samples feasible draws, all eigenvalues of
/// each perturbed matrix kept. Deterministic in seed.
SpectrumCloud sample_pseudospectrum(const Matrix& a, const StructurePtr& structure,
                                    double epsilon, int n_samples, std::uint64_t seed);

/// Max real part over the cloud; a lower bound on the true abscissa.
/// Throws EmptyCloud.
double sampled_abscissa(const SpectrumCloud& cloud);

}  // namespace specradius

#endif  // SPECRADIUS_SAMPLING_HPP
