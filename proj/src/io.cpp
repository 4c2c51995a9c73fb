// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#include "specradius/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "specradius/errors.hpp"
#include "specradius/serialize.hpp"

namespace specradius {

namespace {

using nlohmann::json;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void parse_fail(const std::string& source, int line, const std::string& what) {
  raise(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + what);
}

struct LineReader {
  std::istream& in;
  std::string source;
  int line_no = 0;

  bool next(std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      if (!out.empty() && out.back() == '\r') out.pop_back();
      return true;
    }
    return false;
  }

  /// Next line that is neither a comment nor blank.
  bool next_content(std::string& out) {
    while (next(out)) {
      if (out.empty() || out[0] == '%') continue;
      if (out.find_first_not_of(" \t") == std::string::npos) continue;
      return true;
    }
    return false;
  }
};

}  // namespace

Matrix read_matrix_market(std::istream& in, const std::string& source_name) {
  LineReader reader{in, source_name};
  std::string line;
  if (!reader.next(line)) {
    parse_fail(source_name, 1, "empty file");
  }

  std::istringstream header(line);
  std::string banner, object, layout, field, symmetry;
  if (!(header >> banner >> object >> layout >> field >> symmetry) ||
      lower(banner) != "%%matrixmarket") {
    parse_fail(source_name, reader.line_no, "expected a %%MatrixMarket banner");
  }
  object = lower(object);
  layout = lower(layout);
  field = lower(field);
  symmetry = lower(symmetry);

  if (object != "matrix") {
    parse_fail(source_name, reader.line_no, "object '" + object + "' is not a matrix");
  }
  if (layout != "coordinate" && layout != "array") {
    parse_fail(source_name, reader.line_no, "unknown layout '" + layout + "'");
  }
  if (field != "real" && field != "integer") {
    raise(ErrorCode::UnsupportedField, source_name + ": field '" + field + "' is not supported");
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    raise(ErrorCode::UnsupportedField,
          source_name + ": symmetry '" + symmetry + "' is not supported");
  }
  const bool symmetric = symmetry == "symmetric";

  if (!reader.next_content(line)) {
    parse_fail(source_name, reader.line_no, "missing size line");
  }

  if (layout == "coordinate") {
    long rows = 0, cols = 0, nnz = 0;
    {
      std::istringstream sizes(line);
      if (!(sizes >> rows >> cols >> nnz) || rows < 1 || cols < 1 || nnz < 0) {
        parse_fail(source_name, reader.line_no, "bad coordinate size line '" + line + "'");
      }
    }
    Matrix m = Matrix::Zero(rows, cols);
    for (long k = 0; k < nnz; ++k) {
      if (!reader.next_content(line)) {
        parse_fail(source_name, reader.line_no, "unexpected end of file, expected " +
                                                    std::to_string(nnz) + " entries");
      }
      std::istringstream entry(line);
      long i = 0, j = 0;
      double v = 0.0;
      if (!(entry >> i >> j >> v)) {
        parse_fail(source_name, reader.line_no, "bad entry '" + line + "'");
      }
      if (i < 1 || i > rows || j < 1 || j > cols) {
        parse_fail(source_name, reader.line_no, "index out of range in '" + line + "'");
      }
      if (symmetric && j > i) {
        parse_fail(source_name, reader.line_no,
                   "symmetric storage places entries on or below the diagonal");
      }
      m(i - 1, j - 1) += v;
      if (symmetric && i != j) m(j - 1, i - 1) += v;
    }
    return m;
  }

  // array layout: dense column-major values
  long rows = 0, cols = 0;
  {
    std::istringstream sizes(line);
    if (!(sizes >> rows >> cols) || rows < 1 || cols < 1) {
      parse_fail(source_name, reader.line_no, "bad array size line '" + line + "'");
    }
  }
  if (symmetric && rows != cols) {
    parse_fail(source_name, reader.line_no, "symmetric array storage requires a square matrix");
  }
  Matrix m = Matrix::Zero(rows, cols);
  auto read_value = [&](double& v) {
    std::string tok;
    while (true) {
      if (!reader.next_content(tok)) return false;
      std::istringstream entry(tok);
      if (entry >> v) return true;
      parse_fail(source_name, reader.line_no, "bad value '" + tok + "'");
    }
  };
  if (symmetric) {
    for (long j = 0; j < cols; ++j) {
      for (long i = j; i < rows; ++i) {
        double v = 0.0;
        if (!read_value(v)) {
          parse_fail(source_name, reader.line_no, "unexpected end of file in array data");
        }
        m(i, j) = v;
        m(j, i) = v;
      }
    }
  } else {
    for (long j = 0; j < cols; ++j) {
      for (long i = 0; i < rows; ++i) {
        double v = 0.0;
        if (!read_value(v)) {
          parse_fail(source_name, reader.line_no, "unexpected end of file in array data");
        }
        m(i, j) = v;
      }
    }
  }
  return m;
}

Matrix read_matrix_market(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(ErrorCode::IoError, "cannot open '" + path + "'");
  }
  return read_matrix_market(in, path);
}

void write_matrix_market(const Matrix& m, std::ostream& out) {
  long nnz = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) ++nnz;
    }
  }
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << " " << m.cols() << " " << nnz << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) {
        out << (i + 1) << " " << (j + 1) << " " << format_double(m(i, j)) << "\n";
      }
    }
  }
}

void write_matrix_market(const Matrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    raise(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  }
  write_matrix_market(m, out);
  if (!out) {
    raise(ErrorCode::IoError, "failed writing '" + path + "'");
  }
}

StructurePtr parse_structure_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    raise(ErrorCode::ParseError, std::string("structure JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    raise(ErrorCode::ParseError, "structure JSON must be an object");
  }
  if (!doc.contains("n") || !doc["n"].is_number_integer()) {
    raise(ErrorCode::ParseError, "structure JSON needs an integer field 'n'");
  }

  PerturbationStructure s;
  s.n = doc["n"].get<int>();

  auto read_bound = [](const json& node, const char* key) -> std::optional<double> {
    if (!node.contains(key) || node[key].is_null()) return std::nullopt;
    if (!node[key].is_number()) {
      raise(ErrorCode::ParseError, std::string("bound '") + key + "' must be a number or null");
    }
    return node[key].get<double>();
  };

  const bool has_edges = doc.contains("edges");
  const bool has_rows = doc.contains("rows");
  if (has_edges == has_rows) {
    raise(ErrorCode::ParseError, "structure JSON needs exactly one of 'edges' or 'rows'");
  }

  if (has_edges) {
    if (!doc["edges"].is_array()) {
      raise(ErrorCode::ParseError, "'edges' must be an array");
    }
    for (const json& node : doc["edges"]) {
      if (!node.is_object() || !node.contains("i") || !node.contains("j") ||
          !node["i"].is_number_integer() || !node["j"].is_number_integer()) {
        raise(ErrorCode::ParseError, "each edge needs integer fields 'i' and 'j'");
      }
      PerturbationStructure::Edge e;
      e.i = node["i"].get<int>();
      e.j = node["j"].get<int>();
      e.lower = read_bound(node, "lo");
      e.upper = read_bound(node, "hi");
      s.edges.push_back(e);
    }
  } else {
    const json& rows = doc["rows"];
    if (!rows.is_array() || rows.size() != 2 || !rows[0].is_number_integer() ||
        !rows[1].is_number_integer()) {
      raise(ErrorCode::ParseError, "'rows' must be a two-element integer array [first, last]");
    }
    const int first = rows[0].get<int>();
    const int last = rows[1].get<int>();
    if (first < 1 || last < first) {
      raise(ErrorCode::ParseError, "'rows' range must satisfy 1 <= first <= last");
    }
    const std::optional<double> lo = read_bound(doc, "lo");
    const std::optional<double> hi = read_bound(doc, "hi");
    for (int i = first; i <= last; ++i) {
      for (int j = 1; j <= s.n; ++j) {
        s.edges.push_back({i, j, lo, hi});
      }
    }
  }
  return make_structure(std::move(s));
}

StructurePtr read_structure(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(ErrorCode::IoError, "cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_structure_json(buf.str());
}

Matrix companion_matrix(std::span<const double> coeffs) {
  if (coeffs.empty()) {
    raise(ErrorCode::InvalidArgument, "companion form needs at least one coefficient");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(coeffs.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) m(i, i + 1) = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) m(n - 1, j) = -coeffs[coeffs.size() - 1 - j];
  return m;
}

Matrix circulant_matrix(int n, double diag, double sup, double sub) {
  if (n < 2) {
    raise(ErrorCode::InvalidArgument, "circulant form needs n >= 2");
  }
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) += diag;
    m(i, (i + 1) % n) += sup;
    m(i, (i + n - 1) % n) += sub;
  }
  return m;
}

}  // namespace specradius
