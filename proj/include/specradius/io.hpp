// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPECRADIUS_IO_HPP
#define SPECRADIUS_IO_HPP

#include <iosfwd>
#include <span>
#include <string>

#include "specradius/perturbation.hpp"
#include "specradius/types.hpp"

namespace specradius {

/// Matrix Market reader: coordinate or array layout, real or integer field,
/// general or symmetric storage; 1-based indices densified, lower-triangle
/// symmetric storage mirrored, duplicate coordinate entries summed.
/// Throws ParseError (with line number), UnsupportedField (complex, pattern,
/// skew-symmetric, hermitian), IoError.
Matrix read_matrix_market(const std::string& path);
Matrix read_matrix_market(std::istream& in, const std::string& source_name);

/// Writes coordinate real general form, nonzero entries only, row-major order,
/// 17 significant digits.
void write_matrix_market(const Matrix& m, std::ostream& out);
void write_matrix_market(const Matrix& m, const std::string& path);

/// Structure files are JSON, either explicit edges
///   {"n": 2, "edges": [{"i": 1, "j": 1, "lo": null, "hi": null}, ...]}
/// or a row-block shorthand covering whole rows with shared bounds
///   {"n": 90, "rows": [19, 36], "lo": 0, "hi": 10}
/// (1-based indices, null or absent bound = unbounded).
StructurePtr read_structure(const std::string& path);
StructurePtr parse_structure_json(const std::string& text);

/// Companion form of the monic polynomial with coefficients a_1..a_n:
/// identity on the superdiagonal, last row (-a_n, ..., -a_1).
Matrix companion_matrix(std::span<const double> coeffs);

/// Circulant band matrix: diag on the diagonal, sup on the superdiagonal with
/// wrap entry (n,1), sub on the subdiagonal with wrap entry (1,n). Bands are
/// composed additively, so the n = 2 wrap overlap sums.
Matrix circulant_matrix(int n, double diag, double sup, double sub);

}  // namespace specradius

#endif  // SPECRADIUS_IO_HPP
