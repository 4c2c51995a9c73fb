// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#include "specradius/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "specradius/errors.hpp"

namespace specradius {

namespace {

void write_json_or_null(std::ostream& out, const std::optional<double>& v) {
  if (v) {
    out << format_double(*v);
  } else {
    out << "null";
  }
}

void write_delta_array(std::ostream& out, const SparsePerturbation& delta) {
  out << "[";
  const auto& edges = delta.structure().edges;
  for (std::size_t k = 0; k < delta.size(); ++k) {
    if (k > 0) out << ",";
    out << "{\"i\":" << edges[k].i << ",\"j\":" << edges[k].j
        << ",\"value\":" << format_double(delta[k]) << "}";
  }
  out << "]";
}

void write_string_array(std::ostream& out, const std::vector<std::string>& items) {
  out << "[";
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k > 0) out << ",";
    out << nlohmann::json(items[k]).dump();
  }
  out << "]";
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) {
    raise(ErrorCode::InvalidArgument, "cannot serialize a non-finite number");
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string delta_to_json(const SparsePerturbation& delta) {
  std::ostringstream out;
  write_delta_array(out, delta);
  return out.str();
}

std::vector<std::tuple<int, int, double>> parse_delta_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ParseError, std::string("delta JSON: ") + e.what());
  }
  if (!doc.is_array()) {
    raise(ErrorCode::ParseError, "delta JSON must be an array of triplets");
  }
  std::vector<std::tuple<int, int, double>> triplets;
  for (const auto& node : doc) {
    if (!node.is_object() || !node.contains("i") || !node.contains("j") ||
        !node.contains("value")) {
      raise(ErrorCode::ParseError, "each triplet needs fields i, j, value");
    }
    triplets.emplace_back(node["i"].get<int>(), node["j"].get<int>(),
                          node["value"].get<double>());
  }
  return triplets;
}

void write_abscissa_json(const AbscissaResult& result, std::optional<double> r_over_ell,
                         std::ostream& out) {
  out << "{\"alpha\":" << format_double(result.alpha) << ",\"theta\":";
  write_json_or_null(out, result.theta);
  out << ",\"lambda\":{\"re\":" << format_double(result.triple.lambda.real())
      << ",\"im\":" << format_double(result.triple.lambda.imag()) << "}";
  out << ",\"delta\":";
  write_delta_array(out, result.delta);
  out << ",\"trace\":[";
  for (std::size_t k = 0; k < result.trace.size(); ++k) {
    if (k > 0) out << ",";
    out << "{\"step\":" << format_double(result.trace[k].step_norm)
        << ",\"re_lambda\":" << format_double(result.trace[k].re_lambda) << "}";
  }
  out << "],\"diagnostics\":{\"r_over_ell\":";
  write_json_or_null(out, r_over_ell);
  out << ",\"iterations\":" << result.iterations
      << ",\"converged\":" << (result.converged ? "true" : "false") << ",\"warnings\":";
  write_string_array(out, result.warnings);
  out << "}}\n";
}

void write_radius_json(const RadiusResult& result, std::optional<double> r_over_ell,
                       std::ostream& out) {
  out << "{\"radius\":" << format_double(result.radius) << ",\"trace\":[";
  for (std::size_t k = 0; k < result.trace.size(); ++k) {
    if (k > 0) out << ",";
    out << "{\"epsilon\":" << format_double(result.trace[k].epsilon)
        << ",\"alpha\":" << format_double(result.trace[k].alpha) << ",\"derivative\":";
    write_json_or_null(out, result.trace[k].derivative);
    out << "}";
  }
  out << "],\"delta\":";
  write_delta_array(out, result.final.delta);
  out << ",\"diagnostics\":{\"r_over_ell\":";
  write_json_or_null(out, r_over_ell);
  out << ",\"iterations\":" << result.trace.size()
      << ",\"converged\":" << (result.converged ? "true" : "false")
      << ",\"restarts_used\":" << result.restarts_used
      << ",\"alpha_at_radius\":" << format_double(result.final.alpha) << "}}\n";
}

void write_sweep_csv(std::span<const SweepPoint> points, std::ostream& out) {
  out << "epsilon,alpha,converged,error\n";
  for (const SweepPoint& p : points) {
    out << format_double(p.epsilon) << ",";
    if (p.alpha) out << format_double(*p.alpha);
    out << "," << (p.converged ? "true" : "false") << "," << p.error << "\n";
  }
}

void write_cloud_csv(const SpectrumCloud& cloud, std::ostream& out) {
  out << "re,im,sample_index\n";
  for (const auto& p : cloud.points) {
    out << format_double(p.re) << "," << format_double(p.im) << "," << p.sample_index << "\n";
  }
}

}  // namespace specradius
