// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#include "specradius.h"

#include <exception>
#include <fstream>
#include <iostream>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "specradius/abscissa.hpp"
#include "specradius/errors.hpp"
#include "specradius/io.hpp"
#include "specradius/radius.hpp"
#include "specradius/sampling.hpp"
#include "specradius/serialize.hpp"

using namespace specradius;

struct sr_matrix {
  Matrix m;
};
struct sr_structure {
  StructurePtr s;
};
struct sr_abscissa_result {
  AbscissaResult r;
  double epsilon;
};
struct sr_radius_result {
  RadiusResult r;
};
struct sr_sweep_result {
  std::vector<SweepPoint> points;
};
struct sr_cloud {
  SpectrumCloud c;
};

namespace {

thread_local std::string g_last_error;

sr_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return SR_ERR_INVALID_ARGUMENT;
    case ErrorCode::ShapeMismatch: return SR_ERR_SHAPE_MISMATCH;
    case ErrorCode::EigenFailure: return SR_ERR_EIGEN_FAILURE;
    case ErrorCode::IllConditionedEigenpair: return SR_ERR_ILL_CONDITIONED_EIGENPAIR;
    case ErrorCode::InvalidStructure: return SR_ERR_INVALID_STRUCTURE;
    case ErrorCode::DegenerateObjective: return SR_ERR_DEGENERATE_OBJECTIVE;
    case ErrorCode::InfeasibleEnergy: return SR_ERR_INFEASIBLE_ENERGY;
    case ErrorCode::FullySaturated: return SR_ERR_FULLY_SATURATED;
    case ErrorCode::TooLarge: return SR_ERR_TOO_LARGE;
    case ErrorCode::SingularShift: return SR_ERR_SINGULAR_SHIFT;
    case ErrorCode::MaxIterations: return SR_ERR_MAX_ITERATIONS;
    case ErrorCode::EmptyCloud: return SR_ERR_EMPTY_CLOUD;
    case ErrorCode::ParseError: return SR_ERR_PARSE;
    case ErrorCode::UnsupportedField: return SR_ERR_UNSUPPORTED_FIELD;
    case ErrorCode::IoError: return SR_ERR_IO;
  }
  return SR_ERR_INTERNAL;
}

template <typename Fn>
sr_status guarded(Fn&& fn) {
  try {
    fn();
    return SR_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SR_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SR_ERR_INTERNAL;
  }
}

sr_status invalid(const char* message) {
  g_last_error = message;
  return SR_ERR_INVALID_ARGUMENT;
}

InitPolicy policy_of(const sr_abscissa_options& o) {
  InitPolicy policy;
  switch (o.policy) {
    case SR_INIT_ZERO: policy.kind = InitKind::Zero; break;
    case SR_INIT_FRESH: policy.kind = InitKind::Fresh; break;
    case SR_INIT_WARM: policy.kind = InitKind::Warm; break;
    case SR_INIT_BEST: policy.kind = InitKind::RestartBest; break;
  }
  policy.restarts = o.restarts;
  policy.seed = o.seed;
  return policy;
}

AbscissaOptions abscissa_of(const sr_abscissa_options& o) {
  AbscissaOptions opts;
  opts.tie_tol = o.tie_tol;
  opts.tol_delta = o.tol_delta;
  opts.max_iters = o.max_iters;
  opts.frobenius_stop = o.frobenius_stop != 0;
  return opts;
}

/// Writes through `emit` to the named file, or stdout when path is "-".
template <typename Emit>
void write_to_path(const char* path, Emit&& emit) {
  const std::string target = path;
  if (target == "-") {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(target, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot open '" + target + "' for writing");
  emit(out);
  if (!out) raise(ErrorCode::IoError, "failed writing '" + target + "'");
}

}  // namespace

extern "C" {

const char* sr_status_name(sr_status status) {
  switch (status) {
    case SR_OK: return "Ok";
    case SR_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case SR_ERR_SHAPE_MISMATCH: return "ShapeMismatch";
    case SR_ERR_EIGEN_FAILURE: return "EigenFailure";
    case SR_ERR_ILL_CONDITIONED_EIGENPAIR: return "IllConditionedEigenpair";
    case SR_ERR_INVALID_STRUCTURE: return "InvalidStructure";
    case SR_ERR_DEGENERATE_OBJECTIVE: return "DegenerateObjective";
    case SR_ERR_INFEASIBLE_ENERGY: return "InfeasibleEnergy";
    case SR_ERR_FULLY_SATURATED: return "FullySaturated";
    case SR_ERR_TOO_LARGE: return "TooLarge";
    case SR_ERR_SINGULAR_SHIFT: return "SingularShift";
    case SR_ERR_MAX_ITERATIONS: return "MaxIterations";
    case SR_ERR_EMPTY_CLOUD: return "EmptyCloud";
    case SR_ERR_PARSE: return "ParseError";
    case SR_ERR_UNSUPPORTED_FIELD: return "UnsupportedField";
    case SR_ERR_IO: return "IoError";
    case SR_ERR_INTERNAL: return "InternalError";
  }
  return "UnknownStatus";
}

const char* sr_last_error(void) { return g_last_error.c_str(); }

const char* sr_version(void) { return "0.1.0"; }

sr_status sr_matrix_from_data(int rows, int cols, const double* row_major, sr_matrix** out) {
  if (out == nullptr || row_major == nullptr) return invalid("null pointer argument");
  if (rows < 1 || cols < 1) return invalid("matrix dimensions must be positive");
  return guarded([&] {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) m(i, j) = row_major[static_cast<long>(i) * cols + j];
    }
    if (!m.allFinite()) raise(ErrorCode::InvalidArgument, "matrix contains non-finite entries");
    *out = new sr_matrix{std::move(m)};
  });
}

sr_status sr_matrix_from_matrix_market(const char* path, sr_matrix** out) {
  if (out == nullptr || path == nullptr) return invalid("null pointer argument");
  return guarded([&] { *out = new sr_matrix{read_matrix_market(path)}; });
}

sr_status sr_matrix_companion(const double* coeffs, int n, sr_matrix** out) {
  if (out == nullptr || coeffs == nullptr) return invalid("null pointer argument");
  if (n < 1) return invalid("need at least one coefficient");
  return guarded([&] {
    *out = new sr_matrix{companion_matrix({coeffs, static_cast<std::size_t>(n)})};
  });
}

sr_status sr_matrix_circulant(int n, double diag, double sup, double sub, sr_matrix** out) {
  if (out == nullptr) return invalid("null pointer argument");
  return guarded([&] { *out = new sr_matrix{circulant_matrix(n, diag, sup, sub)}; });
}

sr_status sr_matrix_write_matrix_market(const sr_matrix* m, const char* path) {
  if (m == nullptr || path == nullptr) return invalid("null pointer argument");
  return guarded([&] { write_to_path(path, [&](std::ostream& o) { write_matrix_market(m->m, o); }); });
}

int sr_matrix_rows(const sr_matrix* m) { return m ? static_cast<int>(m->m.rows()) : 0; }
int sr_matrix_cols(const sr_matrix* m) { return m ? static_cast<int>(m->m.cols()) : 0; }

double sr_matrix_get(const sr_matrix* m, int i, int j) {
  if (m == nullptr || i < 1 || j < 1 || i > m->m.rows() || j > m->m.cols()) return 0.0;
  return m->m(i - 1, j - 1);
}

void sr_matrix_free(sr_matrix* m) { delete m; }

sr_status sr_structure_from_json_file(const char* path, sr_structure** out) {
  if (out == nullptr || path == nullptr) return invalid("null pointer argument");
  return guarded([&] { *out = new sr_structure{read_structure(path)}; });
}

sr_status sr_structure_from_json(const char* text, sr_structure** out) {
  if (out == nullptr || text == nullptr) return invalid("null pointer argument");
  return guarded([&] { *out = new sr_structure{parse_structure_json(text)}; });
}

int sr_structure_dim(const sr_structure* s) { return s ? s->s->n : 0; }
int sr_structure_edge_count(const sr_structure* s) {
  return s ? static_cast<int>(s->s->size()) : 0;
}
void sr_structure_free(sr_structure* s) { delete s; }

void sr_abscissa_options_init(sr_abscissa_options* opts) {
  if (opts == nullptr) return;
  opts->tie_tol = kDefaultTieTol;
  opts->tol_delta = 1e-3;
  opts->max_iters = 1000;
  opts->frobenius_stop = 0;
  opts->policy = SR_INIT_BEST;
  opts->restarts = 10;
  opts->seed = 0;
}

void sr_radius_options_init(sr_radius_options* opts) {
  if (opts == nullptr) return;
  sr_abscissa_options_init(&opts->abscissa);
  opts->eps0 = 1.0;
  opts->tol_alpha = 1e-3;
  opts->zeta = 0.1;
  opts->max_iters = 100;
}

sr_status sr_worst_case(const sr_matrix* a, const sr_structure* s, double epsilon,
                        const sr_abscissa_options* opts, sr_abscissa_result** out) {
  if (a == nullptr || s == nullptr || opts == nullptr || out == nullptr) {
    return invalid("null pointer argument");
  }
  return guarded([&] {
    AbscissaResult r = worst_case_multistart(a->m, epsilon, s->s, policy_of(*opts),
                                             abscissa_of(*opts));
    *out = new sr_abscissa_result{std::move(r), epsilon};
  });
}

double sr_abscissa_alpha(const sr_abscissa_result* r) { return r->r.alpha; }

int sr_abscissa_theta(const sr_abscissa_result* r, double* theta) {
  if (!r->r.theta) return -1;
  if (theta != nullptr) *theta = *r->r.theta;
  return 0;
}

int sr_abscissa_converged(const sr_abscissa_result* r) { return r->r.converged ? 1 : 0; }
int sr_abscissa_iterations(const sr_abscissa_result* r) { return r->r.iterations; }

void sr_abscissa_lambda(const sr_abscissa_result* r, double* re, double* im) {
  if (re != nullptr) *re = r->r.triple.lambda.real();
  if (im != nullptr) *im = r->r.triple.lambda.imag();
}

int sr_abscissa_delta_count(const sr_abscissa_result* r) {
  return static_cast<int>(r->r.delta.size());
}

void sr_abscissa_delta_entry(const sr_abscissa_result* r, int k, int* i, int* j, double* value) {
  const auto& edge = r->r.delta.structure().edges[static_cast<std::size_t>(k)];
  if (i != nullptr) *i = edge.i;
  if (j != nullptr) *j = edge.j;
  if (value != nullptr) *value = r->r.delta[static_cast<std::size_t>(k)];
}

sr_status sr_convergence_rate(const sr_matrix* a, const sr_abscissa_result* r, double epsilon,
                              double ell, double* out) {
  if (a == nullptr || r == nullptr || out == nullptr) return invalid("null pointer argument");
  return guarded([&] { *out = convergence_rate_bound(a->m, r->r.triple, epsilon, ell); });
}

sr_status sr_abscissa_write_json(const sr_abscissa_result* r, const double* r_over_ell,
                                 const char* path) {
  if (r == nullptr || path == nullptr) return invalid("null pointer argument");
  return guarded([&] {
    const std::optional<double> diag =
        r_over_ell != nullptr ? std::optional<double>(*r_over_ell) : std::nullopt;
    write_to_path(path, [&](std::ostream& o) { write_abscissa_json(r->r, diag, o); });
  });
}

void sr_abscissa_result_free(sr_abscissa_result* r) { delete r; }

sr_status sr_stability_radius(const sr_matrix* a, const sr_structure* s,
                              const sr_radius_options* opts, sr_radius_result** out) {
  if (a == nullptr || s == nullptr || opts == nullptr || out == nullptr) {
    return invalid("null pointer argument");
  }
  return guarded([&] {
    RadiusOptions options;
    options.abscissa = abscissa_of(opts->abscissa);
    options.eps0 = opts->eps0;
    options.tol_alpha = opts->tol_alpha;
    options.zeta = opts->zeta;
    options.max_iters = opts->max_iters;
    options.init = policy_of(opts->abscissa);
    *out = new sr_radius_result{stability_radius(a->m, s->s, options)};
  });
}

double sr_radius_value(const sr_radius_result* r) { return r->r.radius; }
int sr_radius_converged(const sr_radius_result* r) { return r->r.converged ? 1 : 0; }
int sr_radius_iterations(const sr_radius_result* r) {
  return static_cast<int>(r->r.trace.size());
}
int sr_radius_restarts_used(const sr_radius_result* r) { return r->r.restarts_used; }

void sr_radius_trace_entry(const sr_radius_result* r, int l, double* epsilon, double* alpha) {
  const auto& step = r->r.trace[static_cast<std::size_t>(l)];
  if (epsilon != nullptr) *epsilon = step.epsilon;
  if (alpha != nullptr) *alpha = step.alpha;
}

double sr_radius_final_alpha(const sr_radius_result* r) { return r->r.final.alpha; }

int sr_radius_delta_count(const sr_radius_result* r) {
  return static_cast<int>(r->r.final.delta.size());
}

void sr_radius_delta_entry(const sr_radius_result* r, int k, int* i, int* j, double* value) {
  const auto& edge = r->r.final.delta.structure().edges[static_cast<std::size_t>(k)];
  if (i != nullptr) *i = edge.i;
  if (j != nullptr) *j = edge.j;
  if (value != nullptr) *value = r->r.final.delta[static_cast<std::size_t>(k)];
}

sr_status sr_radius_convergence_rate(const sr_matrix* a, const sr_radius_result* r, double ell,
                                     double* out) {
  if (a == nullptr || r == nullptr || out == nullptr) return invalid("null pointer argument");
  return guarded([&] {
    *out = convergence_rate_bound(a->m, r->r.final.triple, r->r.radius, ell);
  });
}

sr_status sr_radius_write_json(const sr_radius_result* r, const double* r_over_ell,
                               const char* path) {
  if (r == nullptr || path == nullptr) return invalid("null pointer argument");
  return guarded([&] {
    const std::optional<double> diag =
        r_over_ell != nullptr ? std::optional<double>(*r_over_ell) : std::nullopt;
    write_to_path(path, [&](std::ostream& o) { write_radius_json(r->r, diag, o); });
  });
}

void sr_radius_result_free(sr_radius_result* r) { delete r; }

sr_status sr_sweep(const sr_matrix* a, const sr_structure* s, double eps_min, double eps_max,
                   double eps_step, const sr_abscissa_options* opts, sr_sweep_result** out) {
  if (a == nullptr || s == nullptr || opts == nullptr || out == nullptr) {
    return invalid("null pointer argument");
  }
  if (!(eps_step > 0.0) || !(eps_max >= eps_min) || !(eps_min >= 0.0)) {
    return invalid("need 0 <= eps_min <= eps_max and eps_step > 0");
  }
  return guarded([&] {
    std::vector<double> grid;
    for (double e = eps_min; e <= eps_max + 0.5 * eps_step; e += eps_step) grid.push_back(e);
    auto points = abscissa_sweep(a->m, s->s, grid, policy_of(*opts), abscissa_of(*opts));
    *out = new sr_sweep_result{std::move(points)};
  });
}

int sr_sweep_count(const sr_sweep_result* r) { return static_cast<int>(r->points.size()); }

int sr_sweep_entry(const sr_sweep_result* r, int k, double* epsilon, double* alpha) {
  const auto& p = r->points[static_cast<std::size_t>(k)];
  if (epsilon != nullptr) *epsilon = p.epsilon;
  if (!p.alpha) return -1;
  if (alpha != nullptr) *alpha = *p.alpha;
  return 0;
}

sr_status sr_sweep_write_csv(const sr_sweep_result* r, const char* path) {
  if (r == nullptr || path == nullptr) return invalid("null pointer argument");
  return guarded([&] {
    write_to_path(path, [&](std::ostream& o) { write_sweep_csv(r->points, o); });
  });
}

void sr_sweep_result_free(sr_sweep_result* r) { delete r; }

sr_status sr_sample_pseudospectrum(const sr_matrix* a, const sr_structure* s, double epsilon,
                                   int n_samples, uint64_t seed, sr_cloud** out) {
  if (a == nullptr || s == nullptr || out == nullptr) return invalid("null pointer argument");
  return guarded([&] {
    *out = new sr_cloud{sample_pseudospectrum(a->m, s->s, epsilon, n_samples, seed)};
  });
}

int sr_cloud_point_count(const sr_cloud* c) { return static_cast<int>(c->c.points.size()); }

sr_status sr_cloud_abscissa(const sr_cloud* c, double* out) {
  if (c == nullptr || out == nullptr) return invalid("null pointer argument");
  return guarded([&] { *out = sampled_abscissa(c->c); });
}

sr_status sr_cloud_write_csv(const sr_cloud* c, const char* path) {
  if (c == nullptr || path == nullptr) return invalid("null pointer argument");
  return guarded([&] {
    write_to_path(path, [&](std::ostream& o) { write_cloud_csv(c->c, o); });
  });
}

void sr_cloud_free(sr_cloud* c) { delete c; }

}  // extern "C"
