// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPECRADIUS_RADIUS_HPP
#define SPECRADIUS_RADIUS_HPP

#include <optional>
#include <vector>

#include "specradius/abscissa.hpp"

namespace specradius {

struct RadiusOptions {
  AbscissaOptions abscissa;
  double eps0 = 1.0;
  double tol_alpha = 1e-3;
  double zeta = 0.1;   // floor factor: eps_{l+1} >= zeta * eps_l
  int max_iters = 100;
  InitPolicy init;
};

struct RadiusTraceStep {
  double epsilon;
  double alpha;
  std::optional<double> derivative;  // absent when no rightmost triple admits one
};

struct RadiusResult {
  double radius = 0.0;
  std::vector<RadiusTraceStep> trace;
  AbscissaResult final;  // worst case backing the returned radius
  bool converged = false;
  int restarts_used = 0;  // random starts evaluated across all iterations
};

/// d(alpha)/d(eps) at a rightmost eigentriple: eps / (y^*x theta). Strictly
/// positive. Throws DegenerateObjective when theta <= 0.
double abscissa_epsilon_derivative(double epsilon, const EigenTriple& triple, double theta);

/// Newton iteration on eps -> alpha_{eps,H}(A) with a zeta floor on downward
/// steps. Non-Hurwitz systems return radius 0 immediately. When several
/// rightmost eigenvalues tie, the smallest derivative drives the update. A
/// terminal iterate with alpha >= 0 reports min(eps, |Delta|_F): any feasible
/// destabilizing perturbation certifies the radius from above, which pins the
/// exact corner when the optimum is a saturated vertex strictly inside the
/// energy ball.
RadiusResult stability_radius(const Matrix& a, const StructurePtr& structure,
                              const RadiusOptions& options = {});

}  // namespace specradius

#endif  // SPECRADIUS_RADIUS_HPP
