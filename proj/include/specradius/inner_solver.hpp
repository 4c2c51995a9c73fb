// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPECRADIUS_INNER_SOLVER_HPP
#define SPECRADIUS_INNER_SOLVER_HPP

#include <optional>
#include <span>
#include <vector>

#include "specradius/perturbation.hpp"
#include "specradius/types.hpp"

namespace specradius {

enum class SaturationState : unsigned char { Free, AtUpper, AtLower };

/// Which edges the optimizer pins to its upper/lower bound.
struct SaturationSets {
  std::vector<SaturationState> state;

  std::vector<int> upper_indices() const;
  std::vector<int> lower_indices() const;
  int saturated_count() const;
  bool fully_saturated() const { return saturated_count() == static_cast<int>(state.size()); }
  bool operator==(const SaturationSets&) const = default;
};

/// Solution of the inner maximization of <Delta, M> over the feasible set
/// intersected with the energy ball.
struct InnerSolution {
  SparsePerturbation delta;
  /// Ratio between unsaturated optimal entries and the matching objective
  /// coefficients; absent for vertex-fallback solutions.
  std::optional<double> theta;
  SaturationSets sets;
  double objective = 0.0;
  /// Theta value per incremental sweep; nonnegative and non-decreasing.
  std::vector<double> theta_sweep;
  bool vertex_fallback = false;
};

/// Whether a fully saturated instance falls back to exhaustive evaluation of
/// the feasible bound-vertices (Auto: only when the edge count is <= 20).
enum class VertexFallback { Off, Auto };

/// The ratio theta for given saturation sets: sqrt of (eps^2 minus the energy
/// already spent on saturated bounds) over the unsaturated objective mass.
/// Throws DegenerateObjective on a zero denominator and InfeasibleEnergy on a
/// negative radicand.
double saturation_theta(double epsilon, std::span<const double> m,
                        const PerturbationStructure& structure, const SaturationSets& sets);
double saturation_theta(double epsilon, const Matrix& m, const PerturbationStructure& structure,
                        const SaturationSets& sets);

/// Incremental saturation-set construction: grow the saturated sets until the
/// proportional assignment is interior, then assign m_k * theta to the rest.
/// Saturation tests are non-strict, matching the construction's pseudocode.
/// Throws FullySaturated when every edge saturates (unless the fallback
/// applies), DegenerateObjective / InfeasibleEnergy from theta.
InnerSolution solve_inner(double epsilon, std::span<const double> m, const StructurePtr& structure,
                          VertexFallback fallback = VertexFallback::Off);
InnerSolution solve_inner(double epsilon, const Matrix& m, const StructurePtr& structure,
                          VertexFallback fallback = VertexFallback::Off);

/// Brute-force reference for solve_inner: enumerates every disjoint pair of
/// saturation sets, keeps KKT-consistent candidates, adds all feasible
/// bound-vertices, and returns the best. Intended for small instances
/// (throws TooLarge above 12 edges).
struct OracleSolution {
  SparsePerturbation delta;
  double objective = 0.0;
  /// True when the argmax is a fully saturated vertex and no interior
  /// candidate attains the same objective.
  bool fully_saturated = false;
  /// Count of distinct optimizers whose objectives agree within 1e-12.
  int ties = 0;
};
OracleSolution solve_inner_oracle(double epsilon, std::span<const double> m,
                                  const StructurePtr& structure);
OracleSolution solve_inner_oracle(double epsilon, const Matrix& m, const StructurePtr& structure);

/// d/d(eps) of the optimal inner value, equal to eps / theta.
double inner_value_derivative(double epsilon, double theta);

/// Objective coefficients of m restricted to the structure's edges.
std::vector<double> edge_coefficients(const Matrix& m, const PerturbationStructure& structure);

}  // namespace specradius

#endif  // SPECRADIUS_INNER_SOLVER_HPP
