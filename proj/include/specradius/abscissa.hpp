// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPECRADIUS_ABSCISSA_HPP
#define SPECRADIUS_ABSCISSA_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specradius/inner_solver.hpp"
#include "specradius/linalg.hpp"
#include "specradius/perturbation.hpp"

namespace specradius {

struct AbscissaOptions {
  double tie_tol = kDefaultTieTol;
  double tol_delta = 1e-3;
  int max_iters = 1000;
  /// Stop on the Frobenius norm of the update instead of the spectral norm
  /// (an upper bound, cheaper for large systems).
  bool frobenius_stop = false;
  VertexFallback fallback = VertexFallback::Auto;
};

struct AbscissaTraceStep {
  double step_norm;  // |Delta_{k+1} - Delta_k| in the configured stopping norm
  double re_lambda;  // Re lambda_k before the update
};

/// Worst-case perturbation estimate at one energy level.
struct AbscissaResult {
  SparsePerturbation delta;
  double alpha = 0.0;
  EigenTriple triple;  // rightmost eigentriple of A + delta
  std::optional<double> theta;
  int iterations = 0;
  std::vector<AbscissaTraceStep> trace;
  bool converged = false;
  std::vector<std::string> warnings;
};

/// Fixed-point iteration: alternate the rightmost eigentriple of A + Delta_k
/// with the inner maximization at M = Re(y x^*), until the update norm drops
/// below tol_delta. delta0 is projected onto the feasible set first. A
/// max_iters exit returns the best iterate with converged = false.
AbscissaResult worst_case_perturbation(const Matrix& a, double epsilon,
                                       const StructurePtr& structure,
                                       const SparsePerturbation& delta0,
                                       const AbscissaOptions& options = {});
AbscissaResult worst_case_perturbation(const Matrix& a, double epsilon,
                                       const StructurePtr& structure,
                                       const AbscissaOptions& options = {});

/// Linear-convergence-regime indicator 4 sqrt(n) ell eps / (sigma_{n-1}(A - lambda I) (y^*x)^2);
/// values below 1 signal guaranteed local linear convergence. ell is the
/// caller-supplied sensitivity constant (commonly reported with ell = 1 as
/// r over ell). Throws SingularShift when sigma_{n-1} <= 1e-14.
double convergence_rate_bound(const Matrix& a, const EigenTriple& triple, double epsilon,
                              double ell);

enum class InitKind {
  Zero,         // start from the zero perturbation
  Fresh,        // a single random feasible draw per call
  Warm,         // project the previous solution onto the new feasible set
  RestartBest,  // zero plus N random draws, keep the maximal abscissa
};

struct InitPolicy {
  InitKind kind = InitKind::RestartBest;
  int restarts = 10;        // random starts for RestartBest
  bool include_zero = true; // also try the zero start in RestartBest
  std::uint64_t seed = 0;
};

/// Runs worst_case_perturbation from the starts the policy dictates and keeps
/// the result with maximal alpha. Starts that fail with a solver error are
/// skipped (counted in failed_starts); if every start fails the first error is
/// rethrown. seed_offset partitions the seed space between outer iterations.
struct MultiStartStats {
  int attempted = 0;
  int failed = 0;
};
AbscissaResult worst_case_multistart(const Matrix& a, double epsilon,
                                     const StructurePtr& structure, const InitPolicy& policy,
                                     const AbscissaOptions& options,
                                     const SparsePerturbation* previous = nullptr,
                                     std::uint64_t seed_offset = 0,
                                     MultiStartStats* stats = nullptr);

struct SweepPoint {
  double epsilon = 0.0;
  std::optional<double> alpha;
  bool converged = false;
  std::string error;  // error code name when the point failed
};

/// Abscissa curve over an ascending energy grid; per-point failures are
/// recorded in the series rather than thrown.
std::vector<SweepPoint> abscissa_sweep(const Matrix& a, const StructurePtr& structure,
                                       std::span<const double> eps_grid,
                                       const InitPolicy& policy = {InitKind::Warm},
                                       const AbscissaOptions& options = {});

}  // namespace specradius

#endif  // SPECRADIUS_ABSCISSA_HPP
