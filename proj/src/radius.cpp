// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#include "specradius/radius.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "specradius/errors.hpp"

namespace specradius {

namespace {

/// Derivative of the abscissa at the current iterate. With several rightmost
/// eigenvalues the smallest derivative value is the usable subgradient, so
/// each tie member gets its own inner solve; members without a defined theta
/// are skipped.
std::optional<double> min_tie_derivative(const Matrix& a, const SparsePerturbation& delta,
                                         double epsilon, const StructurePtr& structure,
                                         const AbscissaOptions& options, double& inner_out,
                                         double& theta_out) {
  Matrix perturbed = a;
  delta.add_to(perturbed);
  std::optional<double> best;
  for (const EigenTriple& triple : rightmost_eigentriples(perturbed, options.tie_tol)) {
    double theta = 0.0;
    try {
      InnerSolution sol = solve_inner(epsilon, triple.gradient_matrix(), structure,
                                      VertexFallback::Off);
      if (!sol.theta) continue;
      theta = *sol.theta;
    } catch (const Error&) {
      continue;
    }
    if (!(theta > 0.0)) continue;
    const double derivative = abscissa_epsilon_derivative(epsilon, triple, theta);
    if (!best || derivative < *best) {
      best = derivative;
      inner_out = triple.inner;
      theta_out = theta;
    }
  }
  return best;
}

}  // namespace

double abscissa_epsilon_derivative(double epsilon, const EigenTriple& triple, double theta) {
  if (!(theta > 0.0)) {
    raise(ErrorCode::DegenerateObjective, "derivative requires theta > 0");
  }
  if (!(triple.inner > 0.0)) {
    raise(ErrorCode::InvalidArgument, "eigentriple inner product must be positive");
  }
  return epsilon / (triple.inner * theta);
}

RadiusResult stability_radius(const Matrix& a, const StructurePtr& structure,
                              const RadiusOptions& options) {
  if (!(options.zeta > 0.0 && options.zeta < 1.0)) {
    raise(ErrorCode::InvalidArgument, "zeta must lie in (0, 1)");
  }
  if (!(options.eps0 > 0.0)) {
    raise(ErrorCode::InvalidArgument, "eps0 must be positive");
  }
  if (!(options.tol_alpha > 0.0)) {
    raise(ErrorCode::InvalidArgument, "tol_alpha must be positive");
  }

  RadiusResult result{0.0, {}, AbscissaResult{SparsePerturbation(structure), 0.0, {}, 0.0, 0,
                                              {}, true, {}},
                      false, 0};

  // A system that is already unstable has radius zero by definition.
  AbscissaResult unperturbed =
      worst_case_perturbation(a, 0.0, structure, options.abscissa);
  if (unperturbed.alpha >= 0.0) {
    result.final = std::move(unperturbed);
    result.converged = true;
    return result;
  }

  double eps = options.eps0;
  std::optional<SparsePerturbation> previous;
  MultiStartStats stats;

  for (int l = 0; l < options.max_iters; ++l) {
    AbscissaResult res =
        worst_case_multistart(a, eps, structure, options.init, options.abscissa,
                              previous ? &*previous : nullptr, static_cast<std::uint64_t>(l),
                              &stats);
    const double alpha = res.alpha;
    const double norm = res.delta.frobenius_norm();

    double inner = 0.0, theta = 0.0;
    const std::optional<double> derivative =
        min_tie_derivative(a, res.delta, eps, structure, options.abscissa, inner, theta);
    result.trace.push_back({eps, alpha, derivative});

    if (std::abs(alpha) <= options.tol_alpha) {
      // A feasible perturbation with alpha >= 0 certifies the radius from
      // above by its own energy.
      result.radius = alpha >= 0.0 ? std::min(eps, norm) : eps;
      result.final = std::move(res);
      result.converged = true;
      break;
    }
    if (l + 1 == options.max_iters) {
      // Iteration cap: report the last evaluated iterate, no convergence claim.
      result.radius = eps;
      result.final = std::move(res);
      break;
    }
    if (!derivative) {
      raise(ErrorCode::DegenerateObjective,
            "no rightmost eigentriple admits an abscissa derivative at epsilon = " +
                std::to_string(eps));
    }

    double next = std::max(eps - inner * theta * alpha / eps, options.zeta * eps);
    if (alpha > 0.0) {
      next = std::max(std::min(next, norm), options.zeta * eps);
    }
    previous = std::move(res.delta);
    eps = next;
  }
  result.restarts_used = stats.attempted;
  return result;
}

}  // namespace specradius
