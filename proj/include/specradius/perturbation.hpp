// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPECRADIUS_PERTURBATION_HPP
#define SPECRADIUS_PERTURBATION_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "specradius/types.hpp"

namespace specradius {

/// The feasible set of perturbations: a sparsity pattern (edge set) with
/// per-edge saturation intervals [lower, upper]. An absent bound means the
/// entry is unbounded on that side; bounds always bracket zero, so the zero
/// perturbation is feasible.
struct PerturbationStructure {
  struct Edge {
    int i = 0;  // 1-based row index
    int j = 0;  // 1-based column index
    std::optional<double> lower;  // finite, <= 0 when present
    std::optional<double> upper;  // finite, >= 0 when present
  };

  int n = 0;
  std::vector<Edge> edges;

  std::size_t size() const { return edges.size(); }

  /// Throws InvalidStructure naming the first violated condition.
  void validate() const;
};

using StructurePtr = std::shared_ptr<const PerturbationStructure>;

/// Makes a validated shared structure.
StructurePtr make_structure(PerturbationStructure s);

/// A real matrix supported on the structure's edge set, stored as one value
/// per edge in edge order.
class SparsePerturbation {
public:
  explicit SparsePerturbation(StructurePtr structure);
  SparsePerturbation(StructurePtr structure, std::vector<double> values);

  const PerturbationStructure& structure() const { return *structure_; }
  const StructurePtr& structure_ptr() const { return structure_; }

  std::span<const double> values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }
  std::size_t size() const { return values_.size(); }

  double frobenius_norm() const;
  bool within_bounds(double tol = 0.0) const;

  Matrix to_dense() const;
  void add_to(Matrix& a) const;  // a += this

private:
  StructurePtr structure_;
  std::vector<double> values_;
};

/// Euclidean projection of delta onto H intersected with the Frobenius ball of
/// radius epsilon, by Dykstra's alternating projections (box / ball) to a
/// 1e-10 residual, capped at 500 sweeps. The result is always feasible.
SparsePerturbation project_onto_feasible(const SparsePerturbation& delta, double epsilon);

/// Seed-deterministic draw from the feasible set: each edge uniform on
/// [max(lower, -eps), min(upper, eps)], then one rescale-and-clamp pass if the
/// Frobenius norm exceeds eps. Estimation-quality sampling, not a certified
/// covering of the set.
SparsePerturbation sample_feasible(const StructurePtr& structure, double epsilon,
                                   std::uint64_t seed);

}  // namespace specradius

#endif  // SPECRADIUS_PERTURBATION_HPP
