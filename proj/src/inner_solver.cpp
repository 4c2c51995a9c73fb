// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#include "specradius/inner_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "specradius/errors.hpp"

namespace specradius {

namespace {

constexpr int kFallbackEdgeLimit = 20;
constexpr int kOracleEdgeLimit = 12;

void check_inputs(double epsilon, std::span<const double> m,
                  const PerturbationStructure& structure) {
  if (!(epsilon >= 0.0)) {
    raise(ErrorCode::InvalidArgument, "epsilon must be nonnegative");
  }
  if (m.size() != structure.size()) {
    raise(ErrorCode::ShapeMismatch, "coefficient count does not match the edge count");
  }
  for (double v : m) {
    if (!std::isfinite(v)) raise(ErrorCode::InvalidArgument, "objective coefficients must be finite");
  }
}

double objective_of(std::span<const double> m, std::span<const double> values) {
  double obj = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) obj += m[k] * values[k];
  return obj;
}

/// Best feasible vertex of the bound box inside the energy ball, iterating
/// bound choices in lexicographic order (lower before upper) so ties resolve
/// deterministically. Returns false if no vertex is feasible.
bool best_vertex(double epsilon, std::span<const double> m,
                 const PerturbationStructure& structure, std::vector<double>& out_values,
                 SaturationSets& out_sets, double& out_objective) {
  const auto& edges = structure.edges;
  const std::size_t n_edges = edges.size();

  std::vector<std::vector<std::pair<double, SaturationState>>> choices(n_edges);
  for (std::size_t k = 0; k < n_edges; ++k) {
    if (edges[k].lower) choices[k].push_back({*edges[k].lower, SaturationState::AtLower});
    if (edges[k].upper) choices[k].push_back({*edges[k].upper, SaturationState::AtUpper});
    if (choices[k].empty()) return false;  // an unbounded edge admits no vertex
  }

  std::vector<std::size_t> pick(n_edges, 0);
  std::vector<double> values(n_edges, 0.0);
  bool found = false;
  while (true) {
    double norm_sq = 0.0;
    for (std::size_t k = 0; k < n_edges; ++k) {
      values[k] = choices[k][pick[k]].first;
      norm_sq += values[k] * values[k];
    }
    if (norm_sq <= epsilon * epsilon + 1e-12) {
      const double obj = objective_of(m, values);
      if (!found || obj > out_objective) {
        found = true;
        out_objective = obj;
        out_values = values;
        out_sets.state.resize(n_edges);
        for (std::size_t k = 0; k < n_edges; ++k) out_sets.state[k] = choices[k][pick[k]].second;
      }
    }
    // advance the mixed-radix counter
    std::size_t k = 0;
    while (k < n_edges && ++pick[k] == choices[k].size()) pick[k++] = 0;
    if (k == n_edges) break;
  }
  return found;
}

}  // namespace

std::vector<int> SaturationSets::upper_indices() const {
  std::vector<int> idx;
  for (std::size_t k = 0; k < state.size(); ++k) {
    if (state[k] == SaturationState::AtUpper) idx.push_back(static_cast<int>(k));
  }
  return idx;
}

std::vector<int> SaturationSets::lower_indices() const {
  std::vector<int> idx;
  for (std::size_t k = 0; k < state.size(); ++k) {
    if (state[k] == SaturationState::AtLower) idx.push_back(static_cast<int>(k));
  }
  return idx;
}

int SaturationSets::saturated_count() const {
  int count = 0;
  for (SaturationState s : state) {
    if (s != SaturationState::Free) ++count;
  }
  return count;
}

double saturation_theta(double epsilon, std::span<const double> m,
                        const PerturbationStructure& structure, const SaturationSets& sets) {
  check_inputs(epsilon, m, structure);
  if (sets.state.size() != structure.size()) {
    raise(ErrorCode::ShapeMismatch, "saturation state count does not match the edge count");
  }
  double numerator = epsilon * epsilon;
  double denominator = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    switch (sets.state[k]) {
      case SaturationState::AtUpper: {
        const auto& b = structure.edges[k].upper;
        if (!b) raise(ErrorCode::InvalidArgument, "edge saturated at an absent upper bound");
        numerator -= *b * *b;
        break;
      }
      case SaturationState::AtLower: {
        const auto& b = structure.edges[k].lower;
        if (!b) raise(ErrorCode::InvalidArgument, "edge saturated at an absent lower bound");
        numerator -= *b * *b;
        break;
      }
      case SaturationState::Free:
        denominator += m[k] * m[k];
        break;
    }
  }
  if (denominator <= 0.0) {
    raise(ErrorCode::DegenerateObjective,
          "unsaturated objective mass is zero; every unsaturated coefficient vanishes");
  }
  if (numerator < 0.0) {
    raise(ErrorCode::InfeasibleEnergy, "saturated bounds exceed the energy budget");
  }
  return std::sqrt(numerator / denominator);
}

double saturation_theta(double epsilon, const Matrix& m, const PerturbationStructure& structure,
                        const SaturationSets& sets) {
  const std::vector<double> coeffs = edge_coefficients(m, structure);
  return saturation_theta(epsilon, coeffs, structure, sets);
}

InnerSolution solve_inner(double epsilon, std::span<const double> m, const StructurePtr& structure,
                          VertexFallback fallback) {
  check_inputs(epsilon, m, *structure);
  const auto& edges = structure->edges;
  const std::size_t n_edges = edges.size();

  SaturationSets sets;
  sets.state.assign(n_edges, SaturationState::Free);
  std::vector<double> values(n_edges, 0.0);
  std::vector<double> theta_sweep;

  while (true) {
    if (sets.fully_saturated()) {
      if (fallback == VertexFallback::Auto && n_edges <= kFallbackEdgeLimit) {
        InnerSolution sol{SparsePerturbation(structure), std::nullopt, {}, 0.0, theta_sweep, true};
        std::vector<double> vertex;
        if (best_vertex(epsilon, m, *structure, vertex, sol.sets, sol.objective)) {
          sol.delta = SparsePerturbation(structure, std::move(vertex));
          return sol;
        }
      }
      raise(ErrorCode::FullySaturated,
            "the optimizer is fully saturated; the non-saturation assumption is violated");
    }
    const double theta = saturation_theta(epsilon, m, *structure, sets);
    theta_sweep.push_back(theta);
    bool changed = false;
    for (std::size_t k = 0; k < n_edges; ++k) {
      if (sets.state[k] != SaturationState::Free) continue;
      const double target = m[k] * theta;
      if (edges[k].upper && target >= *edges[k].upper) {
        sets.state[k] = SaturationState::AtUpper;
        values[k] = *edges[k].upper;
        changed = true;
      } else if (edges[k].lower && target <= *edges[k].lower) {
        sets.state[k] = SaturationState::AtLower;
        values[k] = *edges[k].lower;
        changed = true;
      }
    }
    if (!changed) {
      for (std::size_t k = 0; k < n_edges; ++k) {
        if (sets.state[k] == SaturationState::Free) values[k] = m[k] * theta;
      }
      InnerSolution sol{SparsePerturbation(structure, std::move(values)),
                        theta,
                        std::move(sets),
                        0.0,
                        std::move(theta_sweep),
                        false};
      sol.objective = objective_of(m, sol.delta.values());
      return sol;
    }
  }
}

InnerSolution solve_inner(double epsilon, const Matrix& m, const StructurePtr& structure,
                          VertexFallback fallback) {
  const std::vector<double> coeffs = edge_coefficients(m, *structure);
  return solve_inner(epsilon, coeffs, structure, fallback);
}

OracleSolution solve_inner_oracle(double epsilon, std::span<const double> m,
                                  const StructurePtr& structure) {
  check_inputs(epsilon, m, *structure);
  const auto& edges = structure->edges;
  const std::size_t n_edges = edges.size();
  if (n_edges > kOracleEdgeLimit) {
    raise(ErrorCode::TooLarge,
          "oracle enumeration limited to " + std::to_string(kOracleEdgeLimit) + " edges");
  }

  constexpr double kSlack = 1e-12;
  bool found = false;
  std::vector<double> best_values;
  double best_objective = 0.0;
  bool best_is_vertex = false;
  int ties = 0;

  auto consider = [&](const std::vector<double>& values, bool is_vertex) {
    const double obj = objective_of(m, values);
    if (!found || obj > best_objective + kSlack) {
      found = true;
      best_objective = obj;
      best_values = values;
      best_is_vertex = is_vertex;
      ties = 0;
      return;
    }
    if (obj >= best_objective - kSlack) {
      double dist_sq = 0.0;
      for (std::size_t k = 0; k < values.size(); ++k) {
        dist_sq += (values[k] - best_values[k]) * (values[k] - best_values[k]);
      }
      if (std::sqrt(dist_sq) > 1e-9) {
        ++ties;
      } else if (is_vertex != best_is_vertex) {
        // Same optimizer reached both as a KKT candidate and as a vertex.
        best_is_vertex = best_is_vertex && is_vertex;
      }
    }
  };

  // Every assignment of each edge to {free, at-upper, at-lower} via a base-3
  // counter; fully saturated assignments are the vertex candidates.
  std::vector<unsigned char> assign(n_edges, 0);
  std::vector<double> values(n_edges, 0.0);
  while (true) {
    bool valid = true;
    bool any_free = false;
    SaturationSets sets;
    sets.state.assign(n_edges, SaturationState::Free);
    for (std::size_t k = 0; k < n_edges && valid; ++k) {
      switch (assign[k]) {
        case 0:
          any_free = true;
          break;
        case 1:
          if (!edges[k].upper) valid = false;
          sets.state[k] = SaturationState::AtUpper;
          break;
        case 2:
          if (!edges[k].lower) valid = false;
          sets.state[k] = SaturationState::AtLower;
          break;
      }
    }
    if (valid) {
      if (!any_free) {
        double norm_sq = 0.0;
        for (std::size_t k = 0; k < n_edges; ++k) {
          values[k] = assign[k] == 1 ? *edges[k].upper : *edges[k].lower;
          norm_sq += values[k] * values[k];
        }
        if (norm_sq <= epsilon * epsilon + kSlack) consider(values, true);
      } else {
        double theta = -1.0;
        try {
          theta = saturation_theta(epsilon, m, *structure, sets);
        } catch (const Error&) {
          valid = false;  // undefined theta for this pair
        }
        if (valid) {
          bool kkt = true;
          for (std::size_t k = 0; k < n_edges && kkt; ++k) {
            const double target = m[k] * theta;
            switch (sets.state[k]) {
              case SaturationState::Free:
                values[k] = target;
                if (edges[k].upper && target > *edges[k].upper + kSlack) kkt = false;
                if (edges[k].lower && target < *edges[k].lower - kSlack) kkt = false;
                break;
              case SaturationState::AtUpper:
                values[k] = *edges[k].upper;
                if (target < *edges[k].upper - kSlack) kkt = false;
                break;
              case SaturationState::AtLower:
                values[k] = *edges[k].lower;
                if (target > *edges[k].lower + kSlack) kkt = false;
                break;
            }
          }
          if (kkt) consider(values, false);
        }
      }
    }
    std::size_t k = 0;
    while (k < n_edges && ++assign[k] == 3) assign[k++] = 0;
    if (k == n_edges) break;
  }

  if (!found) {
    // No KKT-consistent pair and no feasible vertex; with 0 always feasible
    // this can only mean the zero-edge structure, where 0 is the optimum.
    if (n_edges == 0) {
      return OracleSolution{SparsePerturbation(structure), 0.0, true, 0};
    }
    raise(ErrorCode::FullySaturated, "oracle found no feasible candidate");
  }
  return OracleSolution{SparsePerturbation(structure, std::move(best_values)), best_objective,
                        best_is_vertex, ties};
}

OracleSolution solve_inner_oracle(double epsilon, const Matrix& m, const StructurePtr& structure) {
  const std::vector<double> coeffs = edge_coefficients(m, *structure);
  return solve_inner_oracle(epsilon, coeffs, structure);
}

double inner_value_derivative(double epsilon, double theta) {
  if (!(theta > 0.0)) {
    raise(ErrorCode::DegenerateObjective, "derivative requires theta > 0");
  }
  return epsilon / theta;
}

std::vector<double> edge_coefficients(const Matrix& m, const PerturbationStructure& structure) {
  if (m.rows() != structure.n || m.cols() != structure.n) {
    raise(ErrorCode::ShapeMismatch, "objective matrix shape does not match the structure dimension");
  }
  std::vector<double> coeffs(structure.size());
  for (std::size_t k = 0; k < structure.size(); ++k) {
    const auto& e = structure.edges[k];
    coeffs[k] = m(e.i - 1, e.j - 1);
  }
  return coeffs;
}

}  // namespace specradius
