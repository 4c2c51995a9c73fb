// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#include "specradius/abscissa.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "specradius/errors.hpp"

namespace specradius {

namespace {

void check_system(const Matrix& a, const PerturbationStructure& structure) {
  if (a.rows() != a.cols()) {
    raise(ErrorCode::ShapeMismatch, "system matrix must be square");
  }
  if (!a.allFinite()) {
    raise(ErrorCode::InvalidArgument, "system matrix contains non-finite entries");
  }
  if (structure.n != a.rows()) {
    raise(ErrorCode::ShapeMismatch, "structure dimension does not match the system matrix");
  }
}

double update_norm(const SparsePerturbation& next, const SparsePerturbation& prev,
                   bool frobenius) {
  if (frobenius) {
    double sq = 0.0;
    for (std::size_t k = 0; k < next.size(); ++k) {
      sq += (next[k] - prev[k]) * (next[k] - prev[k]);
    }
    return std::sqrt(sq);
  }
  // The difference is supported on the structure's rows only, so its spectral
  // norm is that of the occupied-row block: sqrt(lambda_max(R R^T)).
  const auto& edges = prev.structure().edges;
  const int n = prev.structure().n;
  std::vector<int> row_slot(static_cast<std::size_t>(n), -1);
  int rows = 0;
  for (const auto& e : edges) {
    if (row_slot[static_cast<std::size_t>(e.i - 1)] < 0) {
      row_slot[static_cast<std::size_t>(e.i - 1)] = rows++;
    }
  }
  Matrix block = Matrix::Zero(rows, n);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    block(row_slot[static_cast<std::size_t>(edges[k].i - 1)], edges[k].j - 1) +=
        next[k] - prev[k];
  }
  if (rows == 1) return block.row(0).norm();
  Eigen::SelfAdjointEigenSolver<Matrix> es(block * block.transpose());
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

AbscissaResult zero_energy_result(const Matrix& a, const StructurePtr& structure,
                                  double tie_tol) {
  AbscissaResult result{SparsePerturbation(structure), 0.0, {}, 0.0, 0, {}, true, {}};
  result.triple = rightmost_eigentriples(a, tie_tol).front();
  result.alpha = result.triple.lambda.real();
  return result;
}

}  // namespace

AbscissaResult worst_case_perturbation(const Matrix& a, double epsilon,
                                       const StructurePtr& structure,
                                       const SparsePerturbation& delta0,
                                       const AbscissaOptions& options) {
  check_system(a, *structure);
  if (!(epsilon >= 0.0)) {
    raise(ErrorCode::InvalidArgument, "epsilon must be nonnegative");
  }
  if (!(options.tol_delta > 0.0)) {
    raise(ErrorCode::InvalidArgument, "tol_delta must be positive");
  }
  if (epsilon == 0.0) {
    return zero_energy_result(a, structure, options.tie_tol);
  }

  AbscissaResult result{SparsePerturbation(structure), 0.0, {}, std::nullopt, 0, {}, false, {}};
  SparsePerturbation delta = project_onto_feasible(delta0, epsilon);

  Matrix perturbed = a;
  delta.add_to(perturbed);
  double prev_re = 0.0;

  for (int k = 0; k < options.max_iters; ++k) {
    const EigenTriple triple =
        rightmost_eigentriples(perturbed, options.tie_tol, /*max_triples=*/1).front();
    const double re_lambda = triple.lambda.real();
    if (k > 0 && re_lambda < prev_re - 10.0 * options.tol_delta) {
      result.warnings.push_back("abscissa dropped by " + std::to_string(prev_re - re_lambda) +
                                " at iteration " + std::to_string(k) +
                                "; the iteration left a local basin");
    }
    prev_re = re_lambda;

    InnerSolution inner =
        solve_inner(epsilon, triple.gradient_matrix(), structure, options.fallback);
    const double step = update_norm(inner.delta, delta, options.frobenius_stop);
    result.trace.push_back({step, re_lambda});

    delta = std::move(inner.delta);
    result.theta = inner.theta;
    result.iterations = k + 1;
    perturbed = a;
    delta.add_to(perturbed);

    if (step <= options.tol_delta) {
      result.converged = true;
      break;
    }
  }

  result.triple = rightmost_eigentriples(perturbed, options.tie_tol, /*max_triples=*/1).front();
  result.alpha = result.triple.lambda.real();
  result.delta = std::move(delta);
  return result;
}

AbscissaResult worst_case_perturbation(const Matrix& a, double epsilon,
                                       const StructurePtr& structure,
                                       const AbscissaOptions& options) {
  return worst_case_perturbation(a, epsilon, structure, SparsePerturbation(structure), options);
}

double convergence_rate_bound(const Matrix& a, const EigenTriple& triple, double epsilon,
                              double ell) {
  if (!(ell > 0.0)) {
    raise(ErrorCode::InvalidArgument, "ell must be positive");
  }
  if (a.rows() != a.cols() || a.rows() < 2) {
    raise(ErrorCode::ShapeMismatch, "convergence rate needs a square matrix of dimension >= 2");
  }
  const Eigen::Index n = a.rows();
  ComplexMatrix shifted = a.cast<Complex>();
  shifted.diagonal().array() -= triple.lambda;
  const Vector sv = singular_values(shifted);
  const double sigma = sv(n - 2);  // second smallest
  if (sigma <= 1e-14) {
    raise(ErrorCode::SingularShift, "second smallest singular value is numerically zero");
  }
  return 4.0 * std::sqrt(static_cast<double>(n)) * ell * epsilon /
         (sigma * triple.inner * triple.inner);
}

AbscissaResult worst_case_multistart(const Matrix& a, double epsilon,
                                     const StructurePtr& structure, const InitPolicy& policy,
                                     const AbscissaOptions& options,
                                     const SparsePerturbation* previous,
                                     std::uint64_t seed_offset, MultiStartStats* stats) {
  std::vector<SparsePerturbation> starts;
  switch (policy.kind) {
    case InitKind::Zero:
      starts.emplace_back(structure);
      break;
    case InitKind::Warm:
      if (previous != nullptr) {
        starts.push_back(*previous);  // projected inside worst_case_perturbation
      } else {
        starts.emplace_back(structure);
      }
      break;
    case InitKind::Fresh:
      starts.push_back(sample_feasible(structure, epsilon, policy.seed + seed_offset));
      break;
    case InitKind::RestartBest: {
      if (policy.include_zero) starts.emplace_back(structure);
      const std::uint64_t base =
          policy.seed + seed_offset * static_cast<std::uint64_t>(std::max(policy.restarts, 0));
      for (int r = 0; r < policy.restarts; ++r) {
        starts.push_back(sample_feasible(structure, epsilon, base + static_cast<std::uint64_t>(r)));
      }
      break;
    }
  }
  if (starts.empty()) {
    raise(ErrorCode::InvalidArgument, "initialization policy produced no starting points");
  }

  std::optional<AbscissaResult> best;
  std::optional<Error> first_error;
  for (const SparsePerturbation& start : starts) {
    if (stats != nullptr) ++stats->attempted;
    try {
      AbscissaResult candidate = worst_case_perturbation(a, epsilon, structure, start, options);
      if (!best || candidate.alpha > best->alpha) best = std::move(candidate);
    } catch (const Error& e) {
      if (stats != nullptr) ++stats->failed;
      if (!first_error) first_error = e;
    }
  }
  if (!best) throw *first_error;
  return *std::move(best);
}

std::vector<SweepPoint> abscissa_sweep(const Matrix& a, const StructurePtr& structure,
                                       std::span<const double> eps_grid,
                                       const InitPolicy& policy, const AbscissaOptions& options) {
  check_system(a, *structure);
  if (!std::is_sorted(eps_grid.begin(), eps_grid.end())) {
    raise(ErrorCode::InvalidArgument, "epsilon grid must be sorted ascending");
  }

  std::vector<SweepPoint> points;
  points.reserve(eps_grid.size());
  std::optional<SparsePerturbation> previous;
  for (std::size_t gi = 0; gi < eps_grid.size(); ++gi) {
    const double eps = eps_grid[gi];
    SweepPoint point;
    point.epsilon = eps;
    try {
      AbscissaResult res =
          worst_case_multistart(a, eps, structure, policy, options,
                                previous ? &*previous : nullptr, static_cast<std::uint64_t>(gi));
      point.alpha = res.alpha;
      point.converged = res.converged;
      previous = std::move(res.delta);
    } catch (const Error& e) {
      point.error = error_code_name(e.code());
    }
    points.push_back(std::move(point));
  }
  return points;
}

}  // namespace specradius
