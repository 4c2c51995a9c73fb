// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPECRADIUS_SERIALIZE_HPP
#define SPECRADIUS_SERIALIZE_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "specradius/abscissa.hpp"
#include "specradius/radius.hpp"
#include "specradius/sampling.hpp"

namespace specradius {

/// Decimal form with 17 significant digits; round-trips any double exactly.
std::string format_double(double v);

/// Perturbation as a JSON triplet array: [{"i":..,"j":..,"value":..}, ...].
std::string delta_to_json(const SparsePerturbation& delta);

/// Parses the triplet array back; used for exact round-trips.
std::vector<std::tuple<int, int, double>> parse_delta_json(const std::string& text);

/// Result documents. r_over_ell is the convergence-rate diagnostic evaluated
/// at ell = 1, absent when it could not be computed.
void write_abscissa_json(const AbscissaResult& result, std::optional<double> r_over_ell,
                         std::ostream& out);
void write_radius_json(const RadiusResult& result, std::optional<double> r_over_ell,
                       std::ostream& out);

/// CSV: header epsilon,alpha,converged,error; alpha empty on failed points.
void write_sweep_csv(std::span<const SweepPoint> points, std::ostream& out);

/// CSV: header re,im,sample_index, one row per eigenvalue.
void write_cloud_csv(const SpectrumCloud& cloud, std::ostream& out);

}  // namespace specradius

#endif  // SPECRADIUS_SERIALIZE_HPP
