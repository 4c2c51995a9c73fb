// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Parsing stays here; all computation goes through the
// shared-library C interface in specradius.h.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specradius.h"

namespace {

// exit codes: 0 success, 1 solver failure, 2 input/argument/file problems
constexpr int kExitSolver = 1;
constexpr int kExitInput = 2;

int exit_code_for(sr_status status) {
  switch (status) {
    case SR_ERR_INVALID_ARGUMENT:
    case SR_ERR_INVALID_STRUCTURE:
    case SR_ERR_SHAPE_MISMATCH:
    case SR_ERR_PARSE:
    case SR_ERR_UNSUPPORTED_FIELD:
    case SR_ERR_IO:
      return kExitInput;
    default:
      return kExitSolver;
  }
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void print_error(const std::string& code, const std::string& message) {
  std::cerr << "{\"error\":{\"code\":\"" << json_escape(code) << "\",\"message\":\""
            << json_escape(message) << "\"}}\n";
}

[[noreturn]] void fail(sr_status status) {
  print_error(sr_status_name(status), sr_last_error());
  std::exit(exit_code_for(status));
}

void check(sr_status status) {
  if (status != SR_OK) fail(status);
}

struct MatrixHandle {
  sr_matrix* p = nullptr;
  ~MatrixHandle() { sr_matrix_free(p); }
};
struct StructureHandle {
  sr_structure* p = nullptr;
  ~StructureHandle() { sr_structure_free(p); }
};

sr_init_policy parse_policy(const std::string& name) {
  if (name == "zero") return SR_INIT_ZERO;
  if (name == "fresh") return SR_INIT_FRESH;
  if (name == "warm") return SR_INIT_WARM;
  if (name == "best") return SR_INIT_BEST;
  print_error("InvalidArgument", "unknown policy '" + name + "'");
  std::exit(kExitInput);
}

struct CommonArgs {
  std::string matrix_path;
  std::string structure_path;
  std::string out = "-";
  std::string policy = "best";
  int restarts = 10;
  std::uint64_t seed = 0;
  double tie_tol = 1e-8;
  double tol_delta = 1e-3;
  int max_iters = 1000;
  double ell = 1.0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_structure = true) {
  cmd->add_option("--matrix", args.matrix_path, "system matrix (Matrix Market file)")
      ->required();
  if (with_structure) {
    cmd->add_option("--structure", args.structure_path, "perturbation structure (JSON file)")
        ->required();
  }
  cmd->add_option("--out", args.out, "output path, '-' for stdout");
  cmd->add_option("--policy", args.policy, "initial guess policy: zero|fresh|warm|best");
  cmd->add_option("--restarts", args.restarts, "random starts for the 'best' policy")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", args.seed, "base seed for random starts");
  cmd->add_option("--tie-tol", args.tie_tol, "rightmost eigenvalue tie tolerance");
  cmd->add_option("--tol-delta", args.tol_delta, "fixed-point stopping tolerance");
  cmd->add_option("--max-iters", args.max_iters, "fixed-point iteration cap");
  cmd->add_option("--ell", args.ell, "sensitivity constant for the rate diagnostic");
}

void load_inputs(const CommonArgs& args, MatrixHandle& matrix, StructureHandle& structure) {
  check(sr_matrix_from_matrix_market(args.matrix_path.c_str(), &matrix.p));
  check(sr_structure_from_json_file(args.structure_path.c_str(), &structure.p));
}

sr_abscissa_options make_options(const CommonArgs& args) {
  sr_abscissa_options opts;
  sr_abscissa_options_init(&opts);
  opts.tie_tol = args.tie_tol;
  opts.tol_delta = args.tol_delta;
  opts.max_iters = args.max_iters;
  opts.policy = parse_policy(args.policy);
  opts.restarts = args.restarts;
  opts.seed = args.seed;
  return opts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structured pseudospectral abscissa and stability radius toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  double epsilon = 1.0;
  double eps0 = 1.0;
  double tol_alpha = 1e-3;
  double zeta = 0.1;
  int newton_iters = 100;
  double eps_min = 0.0, eps_max = 1.0, eps_step = 0.1;
  int n_samples = 1000;

  auto* abscissa = app.add_subcommand("abscissa", "worst-case perturbation at one energy");
  add_common(abscissa, args);
  abscissa->add_option("--epsilon", epsilon, "perturbation energy budget")->required();

  auto* radius = app.add_subcommand("radius", "structured stability radius");
  add_common(radius, args);
  radius->add_option("--eps0", eps0, "initial energy");
  radius->add_option("--tol-alpha", tol_alpha, "stopping tolerance on |alpha|");
  radius->add_option("--zeta", zeta, "step floor factor in (0,1)");
  radius->add_option("--newton-iters", newton_iters, "Newton iteration cap");

  auto* sweep = app.add_subcommand("sweep", "abscissa curve over an energy grid");
  add_common(sweep, args);
  sweep->add_option("--eps-min", eps_min, "grid start");
  sweep->add_option("--eps-max", eps_max, "grid end")->required();
  sweep->add_option("--eps-step", eps_step, "grid step");

  auto* sample = app.add_subcommand("sample", "Monte-Carlo spectrum estimate");
  add_common(sample, args);
  sample->add_option("--epsilon", epsilon, "perturbation energy budget")->required();
  sample->add_option("--samples", n_samples, "number of random perturbations");

  auto* generate = app.add_subcommand("generate", "write an example system matrix");
  std::string gen_out = "-";
  std::vector<double> coeffs;
  int circ_n = 10;
  double circ_diag = -0.1, circ_sup = 1.0, circ_sub = -1.0;
  auto* companion = generate->add_subcommand("companion", "companion form of a polynomial");
  companion->add_option("--coeffs", coeffs, "coefficients a_1..a_n")
      ->required()
      ->delimiter(',');
  companion->add_option("--out", gen_out, "output path, '-' for stdout");
  auto* circulant = generate->add_subcommand("circulant", "circulant band matrix");
  circulant->add_option("--n", circ_n, "dimension");
  circulant->add_option("--diag", circ_diag, "diagonal value");
  circulant->add_option("--sup", circ_sup, "superdiagonal value (wraps to (n,1))");
  circulant->add_option("--sub", circ_sub, "subdiagonal value (wraps to (1,n))");
  circulant->add_option("--out", gen_out, "output path, '-' for stdout");
  generate->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("InvalidArgument", e.what());
    return kExitInput;
  }

  if (abscissa->parsed()) {
    MatrixHandle matrix;
    StructureHandle structure;
    load_inputs(args, matrix, structure);
    const sr_abscissa_options opts = make_options(args);
    sr_abscissa_result* result = nullptr;
    check(sr_worst_case(matrix.p, structure.p, epsilon, &opts, &result));
    double rate = 0.0;
    const bool have_rate =
        sr_convergence_rate(matrix.p, result, epsilon, args.ell, &rate) == SR_OK;
    const sr_status st =
        sr_abscissa_write_json(result, have_rate ? &rate : nullptr, args.out.c_str());
    sr_abscissa_result_free(result);
    check(st);
    return 0;
  }

  if (radius->parsed()) {
    MatrixHandle matrix;
    StructureHandle structure;
    load_inputs(args, matrix, structure);
    sr_radius_options opts;
    sr_radius_options_init(&opts);
    opts.abscissa = make_options(args);
    opts.eps0 = eps0;
    opts.tol_alpha = tol_alpha;
    opts.zeta = zeta;
    opts.max_iters = newton_iters;
    sr_radius_result* result = nullptr;
    check(sr_stability_radius(matrix.p, structure.p, &opts, &result));
    if (sr_radius_converged(result) == 0) {
      sr_radius_result_free(result);
      print_error("MaxIterations", "Newton iteration cap reached before |alpha| <= tol_alpha");
      return kExitSolver;
    }
    double rate = 0.0;
    const bool have_rate = sr_radius_convergence_rate(matrix.p, result, args.ell, &rate) == SR_OK;
    const sr_status st =
        sr_radius_write_json(result, have_rate ? &rate : nullptr, args.out.c_str());
    sr_radius_result_free(result);
    check(st);
    return 0;
  }

  if (sweep->parsed()) {
    MatrixHandle matrix;
    StructureHandle structure;
    load_inputs(args, matrix, structure);
    const sr_abscissa_options opts = make_options(args);
    sr_sweep_result* result = nullptr;
    check(sr_sweep(matrix.p, structure.p, eps_min, eps_max, eps_step, &opts, &result));
    const sr_status st = sr_sweep_write_csv(result, args.out.c_str());
    sr_sweep_result_free(result);
    check(st);
    return 0;
  }

  if (sample->parsed()) {
    MatrixHandle matrix;
    StructureHandle structure;
    load_inputs(args, matrix, structure);
    sr_cloud* cloud = nullptr;
    check(sr_sample_pseudospectrum(matrix.p, structure.p, epsilon, n_samples, args.seed, &cloud));
    const sr_status st = sr_cloud_write_csv(cloud, args.out.c_str());
    sr_cloud_free(cloud);
    check(st);
    return 0;
  }

  if (generate->parsed()) {
    MatrixHandle matrix;
    if (companion->parsed()) {
      check(sr_matrix_companion(coeffs.data(), static_cast<int>(coeffs.size()), &matrix.p));
    } else {
      check(sr_matrix_circulant(circ_n, circ_diag, circ_sup, circ_sub, &matrix.p));
    }
    check(sr_matrix_write_matrix_market(matrix.p, gen_out.c_str()));
    return 0;
  }

  return kExitInput;
}
