#pragma once

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "liewe/error.hpp"
#include "liewe/liealg.hpp"
#include "liewe/riemann.hpp"

// MLA v1, a line-oriented text format for metric Lie algebras:
//
//   mla 1
//   dim 3
//   bracket 1 3 = -1 0 0      # [e1, e3] = -e1, indices 1-based, I < J
//   metric
//   1 0 0
//   0 1 0
//   0 0 1
//
// '#' starts a comment. [e_J, e_I] is filled in by antisymmetry.

namespace liewe {

/// One bracket line, 0-based with i < j.
struct MlaBracket {
  int i = 0;
  int j = 0;
  VectorXd coeffs;
  int line = 0;

  friend bool operator==(const MlaBracket& a, const MlaBracket& b) {
    return a.i == b.i && a.j == b.j && a.coeffs.size() == b.coeffs.size() &&
           a.coeffs == b.coeffs;
  }
};

struct MlaDocument {
  int version = 1;
  int dim = 0;
  std::vector<MlaBracket> brackets;
  MatrixXd metric;
  int metric_line = 0;

  friend bool operator==(const MlaDocument& a, const MlaDocument& b) {
    return a.version == b.version && a.dim == b.dim && a.brackets == b.brackets &&
           a.metric.rows() == b.metric.rows() && a.metric.cols() == b.metric.cols() &&
           a.metric == b.metric;
  }
};

struct ParseOptions {
  bool check_jacobi = true;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t p = 0;
  while (p < s.size()) {
    while (p < s.size() && (s[p] == ' ' || s[p] == '\t' || s[p] == '\r')) ++p;
    if (p >= s.size()) break;
    std::size_t q = p;
    while (q < s.size() && s[q] != ' ' && s[q] != '\t' && s[q] != '\r') ++q;
    out.push_back(s.substr(p, q - p));
    p = q;
  }
  return out;
}

inline double parse_double(std::string_view tok, int line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last)
    throw Error(Errc::parse_number, "not a number: '" + std::string(tok) + "'", line);
  if (!std::isfinite(v))
    throw Error(Errc::parse_number, "non-finite number: '" + std::string(tok) + "'", line);
  return v;
}

inline long parse_int(std::string_view tok, int line, Errc code) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty())
    throw Error(code, "not an integer: '" + std::string(tok) + "'", line);
  return v;
}

inline std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

/// Parses an MLA v1 document. Errors carry the offending line (1-based).
inline MlaDocument parse_mla(std::string_view text, const ParseOptions& opt = {}) {
  MlaDocument doc;
  doc.version = 0;
  std::map<std::pair<int, int>, int> seen;
  int metric_rows_left = -1;
  int lineno = 0;
  int last = 1;  // last line with content; end-of-input errors point here
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = detail::split_ws(line);
    if (tok.empty()) continue;
    last = lineno;

    if (metric_rows_left > 0) {
      const int r = doc.dim - metric_rows_left;
      if (static_cast<int>(tok.size()) != doc.dim)
        throw Error(Errc::parse_incomplete,
                    "metric row needs " + std::to_string(doc.dim) + " numbers", lineno);
      for (int c = 0; c < doc.dim; ++c) doc.metric(r, c) = detail::parse_double(tok[c], lineno);
      --metric_rows_left;
      continue;
    }

    if (doc.version == 0) {
      if (tok.size() != 2 || tok[0] != "mla")
        throw Error(Errc::parse_header, "first line must be 'mla 1'", lineno);
      const long v = detail::parse_int(tok[1], lineno, Errc::parse_header);
      if (v != 1) throw Error(Errc::parse_header, "unsupported version " + std::string(tok[1]), lineno);
      doc.version = 1;
      continue;
    }

    const std::string_view dir = tok[0];
    if (dir == "dim") {
      if (doc.dim != 0) throw Error(Errc::parse_directive, "duplicate 'dim'", lineno);
      if (tok.size() != 2) throw Error(Errc::parse_directive, "usage: dim N", lineno);
      const long n = detail::parse_int(tok[1], lineno, Errc::parse_number);
      if (n < 1 || n > 64) throw Error(Errc::parse_number, "dim must be in 1..64", lineno);
      doc.dim = static_cast<int>(n);
    } else if (dir == "bracket") {
      if (doc.dim == 0) throw Error(Errc::parse_directive, "'bracket' before 'dim'", lineno);
      if (tok.size() != static_cast<std::size_t>(doc.dim) + 4 || tok[3] != "=")
        throw Error(Errc::parse_directive,
                    "usage: bracket I J = a1 ... a" + std::to_string(doc.dim), lineno);
      const long I = detail::parse_int(tok[1], lineno, Errc::parse_index);
      const long J = detail::parse_int(tok[2], lineno, Errc::parse_index);
      if (I < 1 || J < 1 || I > doc.dim || J > doc.dim)
        throw Error(Errc::parse_index, "bracket index out of range 1.." + std::to_string(doc.dim),
                    lineno);
      if (I == J) throw Error(Errc::parse_self_bracket, "self-bracket not allowed", lineno);
      if (I > J) throw Error(Errc::parse_index, "bracket indices must satisfy I < J", lineno);
      const auto key = std::make_pair(static_cast<int>(I) - 1, static_cast<int>(J) - 1);
      if (const auto it = seen.find(key); it != seen.end())
        throw Error(Errc::parse_duplicate_bracket,
                    "duplicate bracket, first given on line " + std::to_string(it->second), lineno);
      seen.emplace(key, lineno);
      MlaBracket b{key.first, key.second, VectorXd(doc.dim), lineno};
      for (int k = 0; k < doc.dim; ++k) b.coeffs(k) = detail::parse_double(tok[4 + k], lineno);
      doc.brackets.push_back(std::move(b));
    } else if (dir == "metric") {
      if (doc.dim == 0) throw Error(Errc::parse_directive, "'metric' before 'dim'", lineno);
      if (doc.metric_line != 0) throw Error(Errc::parse_directive, "duplicate 'metric'", lineno);
      if (tok.size() != 1) throw Error(Errc::parse_directive, "'metric' takes no arguments", lineno);
      doc.metric = MatrixXd::Zero(doc.dim, doc.dim);
      doc.metric_line = lineno;
      metric_rows_left = doc.dim;
    } else {
      throw Error(Errc::parse_directive, "unknown directive '" + std::string(dir) + "'", lineno);
    }
  }
  if (doc.version == 0) throw Error(Errc::parse_header, "empty document", last);
  if (doc.dim == 0) throw Error(Errc::parse_incomplete, "missing 'dim'", last);
  if (doc.metric_line == 0) throw Error(Errc::parse_incomplete, "missing 'metric'", last);
  if (metric_rows_left > 0) throw Error(Errc::parse_incomplete, "metric has too few rows", last);

  const double gmax = std::max(1.0, doc.metric.cwiseAbs().maxCoeff());
  if ((doc.metric - doc.metric.transpose()).cwiseAbs().maxCoeff() > kTauAlg * gmax)
    throw Error(Errc::parse_metric_symmetry, "metric is not symmetric", doc.metric_line);
  Eigen::LLT<MatrixXd> llt(linalg::sym(doc.metric));
  if (llt.info() != Eigen::Success || linalg::sym_eigenvalues(doc.metric)(0) <= 0.0)
    throw Error(Errc::parse_metric_spd, "metric is not positive definite", doc.metric_line);

  if (opt.check_jacobi) {
    std::vector<Bracket> br;
    for (const auto& b : doc.brackets) br.push_back({b.i, b.j, b.coeffs});
    const auto rep = validate_algebra(LieAlgebra::from_brackets(doc.dim, br));
    if (!rep.ok()) {
      const auto& v = rep.violations.front();
      int where = 0;
      for (const auto& b : doc.brackets) {
        const bool touches = (b.i == v.i || b.i == v.j || b.i == v.k) &&
                             (b.j == v.i || b.j == v.j || b.j == v.k);
        if (touches) where = std::max(where, b.line);
      }
      std::ostringstream msg;
      msg << "Jacobi identity fails for (e" << v.i + 1 << ", e" << v.j + 1 << ", e" << v.k + 1
          << "), residual " << v.magnitude;
      throw Error(Errc::parse_jacobi, msg.str(), where);
    }
  }
  return doc;
}

inline LieAlgebra to_algebra(const MlaDocument& doc) {
  std::vector<Bracket> br;
  for (const auto& b : doc.brackets) br.push_back({b.i, b.j, b.coeffs});
  return LieAlgebra::from_brackets(doc.dim, br);
}

inline MetricLieAlgebra to_metric_algebra(const MlaDocument& doc) {
  return MetricLieAlgebra(to_algebra(doc), doc.metric);
}

/// Document for M listing every nonzero [e_i, e_j] with i < j.
inline MlaDocument to_document(const MetricLieAlgebra& M) {
  MlaDocument doc;
  doc.dim = M.dim();
  for (int i = 0; i < doc.dim; ++i)
    for (int j = i + 1; j < doc.dim; ++j) {
      const VectorXd c = M.algebra().bracket_basis(i, j).array() + 0.0;  // drops -0
      if (c.cwiseAbs().maxCoeff() > 0.0) doc.brackets.push_back({i, j, c, 0});
    }
  doc.metric = M.metric().array() + 0.0;
  return doc;
}

/// Numbers use the shortest representation that reads back to the same double.
inline std::string emit_mla(const MlaDocument& doc) {
  std::string out = "mla " + std::to_string(doc.version) + "\ndim " + std::to_string(doc.dim) + "\n";
  for (const auto& b : doc.brackets) {
    out += "bracket " + std::to_string(b.i + 1) + " " + std::to_string(b.j + 1) + " =";
    for (Eigen::Index k = 0; k < b.coeffs.size(); ++k) out += " " + detail::shortest(b.coeffs(k));
    out += "\n";
  }
  out += "metric\n";
  for (Eigen::Index r = 0; r < doc.metric.rows(); ++r) {
    for (Eigen::Index c = 0; c < doc.metric.cols(); ++c) {
      if (c) out += " ";
      out += detail::shortest(doc.metric(r, c));
    }
    out += "\n";
  }
  return out;
}

}  // namespace liewe
