// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#include "specradius/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "specradius/errors.hpp"

namespace specradius {

namespace {

std::string edge_label(const PerturbationStructure::Edge& e) {
  return "(" + std::to_string(e.i) + "," + std::to_string(e.j) + ")";
}

double clamp_edge(double v, const PerturbationStructure::Edge& e) {
  if (e.lower && v < *e.lower) v = *e.lower;
  if (e.upper && v > *e.upper) v = *e.upper;
  return v;
}

}  // namespace

void PerturbationStructure::validate() const {
  if (n < 1) {
    raise(ErrorCode::InvalidStructure, "dimension n must be positive, got " + std::to_string(n));
  }
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    if (e.i < 1 || e.i > n || e.j < 1 || e.j > n) {
      raise(ErrorCode::InvalidStructure,
            "edge " + edge_label(e) + " outside [1," + std::to_string(n) + "]^2");
    }
    if (!seen.insert({e.i, e.j}).second) {
      raise(ErrorCode::InvalidStructure, "duplicate edge " + edge_label(e));
    }
    if (e.lower && (!std::isfinite(*e.lower) || *e.lower > 0.0)) {
      raise(ErrorCode::InvalidStructure,
            "edge " + edge_label(e) + " lower bound must be finite and <= 0 (use null for unbounded)");
    }
    if (e.upper && (!std::isfinite(*e.upper) || *e.upper < 0.0)) {
      raise(ErrorCode::InvalidStructure,
            "edge " + edge_label(e) + " upper bound must be finite and >= 0 (use null for unbounded)");
    }
  }
}

StructurePtr make_structure(PerturbationStructure s) {
  s.validate();
  return std::make_shared<const PerturbationStructure>(std::move(s));
}

SparsePerturbation::SparsePerturbation(StructurePtr structure)
    : structure_(std::move(structure)), values_(structure_->size(), 0.0) {}

SparsePerturbation::SparsePerturbation(StructurePtr structure, std::vector<double> values)
    : structure_(std::move(structure)), values_(std::move(values)) {
  if (values_.size() != structure_->size()) {
    raise(ErrorCode::ShapeMismatch, "value count does not match the structure's edge count");
  }
}

double SparsePerturbation::frobenius_norm() const {
  double sq = 0.0;
  for (double v : values_) sq += v * v;
  return std::sqrt(sq);
}

bool SparsePerturbation::within_bounds(double tol) const {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const auto& e = structure_->edges[k];
    if (e.lower && values_[k] < *e.lower - tol) return false;
    if (e.upper && values_[k] > *e.upper + tol) return false;
  }
  return true;
}

Matrix SparsePerturbation::to_dense() const {
  Matrix d = Matrix::Zero(structure_->n, structure_->n);
  add_to(d);
  return d;
}

void SparsePerturbation::add_to(Matrix& a) const {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const auto& e = structure_->edges[k];
    a(e.i - 1, e.j - 1) += values_[k];
  }
}

SparsePerturbation project_onto_feasible(const SparsePerturbation& delta, double epsilon) {
  if (!(epsilon >= 0.0)) {
    raise(ErrorCode::InvalidArgument, "epsilon must be nonnegative");
  }
  const auto& edges = delta.structure().edges;
  const std::size_t m = delta.size();

  std::vector<double> x(delta.values().begin(), delta.values().end());
  std::vector<double> p(m, 0.0), q(m, 0.0), boxed(m, 0.0);

  constexpr double kTol = 1e-10;
  constexpr int kMaxSweeps = 500;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    for (std::size_t k = 0; k < m; ++k) {
      const double z = x[k] + p[k];
      boxed[k] = clamp_edge(z, edges[k]);
      p[k] = z - boxed[k];
    }
    double norm_sq = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double z = boxed[k] + q[k];
      q[k] = z;  // reuse q as the pre-projection point for this half-step
      norm_sq += z * z;
    }
    const double norm = std::sqrt(norm_sq);
    const double shrink = norm > epsilon && norm > 0.0 ? epsilon / norm : 1.0;
    double move = 0.0, split = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double xn = q[k] * shrink;
      q[k] -= xn;
      move += (xn - x[k]) * (xn - x[k]);
      split += (boxed[k] - xn) * (boxed[k] - xn);
      x[k] = xn;
    }
    if (std::sqrt(move) <= kTol && std::sqrt(split) <= kTol) break;
  }

  // The ball projection was applied last, so the norm constraint holds; snap
  // the residual box violation (at most the Dykstra tolerance) and keep the
  // norm by shrinking toward 0, which cannot leave the box.
  for (std::size_t k = 0; k < m; ++k) x[k] = clamp_edge(x[k], edges[k]);
  double norm_sq = 0.0;
  for (double v : x) norm_sq += v * v;
  const double norm = std::sqrt(norm_sq);
  if (norm > epsilon && norm > 0.0) {
    const double shrink = epsilon / norm;
    for (double& v : x) v *= shrink;
  }
  return SparsePerturbation(delta.structure_ptr(), std::move(x));
}

SparsePerturbation sample_feasible(const StructurePtr& structure, double epsilon,
                                   std::uint64_t seed) {
  if (!(epsilon >= 0.0)) {
    raise(ErrorCode::InvalidArgument, "epsilon must be nonnegative");
  }
  std::mt19937_64 rng(seed);
  // Explicit bit-to-double mapping keeps the draw identical across platforms.
  auto uniform01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  const auto& edges = structure->edges;
  std::vector<double> v(edges.size(), 0.0);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const double lo = std::max(edges[k].lower.value_or(-epsilon), -epsilon);
    const double hi = std::min(edges[k].upper.value_or(epsilon), epsilon);
    v[k] = lo + (hi - lo) * uniform01();
  }
  double norm_sq = 0.0;
  for (double val : v) norm_sq += val * val;
  const double norm = std::sqrt(norm_sq);
  if (norm > epsilon && norm > 0.0) {
    const double shrink = epsilon / norm;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      v[k] = clamp_edge(v[k] * shrink, edges[k]);
    }
  }
  return SparsePerturbation(structure, std::move(v));
}

}  // namespace specradius
