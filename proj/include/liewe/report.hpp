#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "liewe/error.hpp"

namespace liewe {

using RecordValue =
    std::variant<bool, long long, double, std::string, Eigen::VectorXd, Eigen::MatrixXd>;

/// Key-value report; iteration (and therefore emission) is in sorted key order.
using Records = std::map<std::string, RecordValue>;

enum class ReportFormat { text, records };

/// 17 significant digits: fixed notation for decimal exponents in [-5, 17),
/// scientific otherwise. Negative zero prints as zero.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  const char* e = std::strchr(buf, 'e');
  const int exp10 = std::atoi(e + 1);
  if (exp10 < -5 || exp10 >= 17) return buf;
  std::snprintf(buf, sizeof buf, "%.*f", 16 - exp10, v);
  return buf;
}

inline std::string format_value(const RecordValue& value) {
  struct Visitor {
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const Eigen::VectorXd& v) const {
      std::string out = "[";
      for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_number(v(i));
      return out + "]";
    }
    std::string operator()(const Eigen::MatrixXd& m) const {
      // Rows are separated by ';'. A single row keeps a trailing ';' to stay a matrix.
      std::string out = "[";
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) out += (c ? " " : "") + format_number(m(r, c));
        if (r + 1 < m.rows() || m.rows() <= 1) out += ";";
        if (r + 1 < m.rows()) out += " ";
      }
      return out + "]";
    }
  };
  return std::visit(Visitor{}, value);
}

/// One `key = value` line per record.
inline std::string emit_records(const Records& recs) {
  std::string out;
  for (const auto& [k, v] : recs) out += k + " = " + format_value(v) + "\n";
  return out;
}

/// Aligned table: scalars beside their key, matrices as indented row blocks.
inline std::string emit_text(const Records& recs) {
  std::size_t width = 0;
  for (const auto& [k, v] : recs) width = std::max(width, k.size());
  std::string out;
  for (const auto& [k, v] : recs) {
    std::string head = k + std::string(width - k.size(), ' ') + "  ";
    if (const auto* m = std::get_if<Eigen::MatrixXd>(&v); m && m->rows() > 0 && m->cols() > 0) {
      std::vector<std::string> cells;
      std::size_t cw = 0;
      for (Eigen::Index r = 0; r < m->rows(); ++r)
        for (Eigen::Index c = 0; c < m->cols(); ++c) {
          cells.push_back(format_number((*m)(r, c)));
          cw = std::max(cw, cells.back().size());
        }
      out += head + "(" + std::to_string(m->rows()) + "x" + std::to_string(m->cols()) + ")\n";
      std::size_t idx = 0;
      for (Eigen::Index r = 0; r < m->rows(); ++r) {
        out += "    ";
        for (Eigen::Index c = 0; c < m->cols(); ++c) {
          const std::string& s = cells[idx++];
          out += std::string(cw - s.size() + (c ? 2 : 0), ' ') + s;
        }
        out += "\n";
      }
    } else {
      out += head + format_value(v) + "\n";
    }
  }
  return out;
}

inline std::string emit_report(const Records& recs, ReportFormat fmt) {
  return fmt == ReportFormat::records ? emit_records(recs) : emit_text(recs);
}

namespace detail {

inline bool read_double(std::string_view s, double& out) {
  if (s == "nan") return out = std::nan(""), true;
  if (s == "inf") return out = HUGE_VAL, true;
  if (s == "-inf") return out = -HUGE_VAL, true;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

inline std::vector<double> read_numbers(std::string_view s, int line) {
  std::vector<double> out;
  std::size_t p = 0;
  while (p < s.size()) {
    while (p < s.size() && s[p] == ' ') ++p;
    if (p >= s.size()) break;
    std::size_t q = s.find(' ', p);
    if (q == std::string_view::npos) q = s.size();
    double v = 0.0;
    if (!read_double(s.substr(p, q - p), v))
      throw Error(Errc::parse_number, "bad number in record", line);
    out.push_back(v);
    p = q;
  }
  return out;
}

}  // namespace detail

/// Inverse of emit_records.
inline Records parse_records(std::string_view text) {
  Records out;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (line.empty()) continue;
    const auto eq = line.find(" = ");
    if (eq == std::string_view::npos) throw Error(Errc::parse_directive, "expected 'key = value'", lineno);
    const std::string key(line.substr(0, eq));
    const std::string_view val = line.substr(eq + 3);
    if (!val.empty() && val.front() == '[') {
      if (val.back() != ']') throw Error(Errc::parse_directive, "unterminated bracket", lineno);
      const std::string_view body = val.substr(1, val.size() - 2);
      if (body.find(';') == std::string_view::npos) {
        const auto nums = detail::read_numbers(body, lineno);
        out[key] = Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(nums.data(), nums.size()));
      } else {
        std::vector<std::vector<double>> rows;
        std::size_t p = 0;
        while (p <= body.size()) {
          std::size_t q = body.find(';', p);
          if (q == std::string_view::npos) q = body.size();
          const auto row = detail::read_numbers(body.substr(p, q - p), lineno);
          if (!row.empty() || q < body.size()) rows.push_back(row);
          p = q + 1;
        }
        while (!rows.empty() && rows.back().empty()) rows.pop_back();
        const std::size_t cols = rows.empty() ? 0 : rows.front().size();
        Eigen::MatrixXd m(rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
          if (rows[r].size() != cols) throw Error(Errc::parse_directive, "ragged matrix", lineno);
          for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
        }
        out[key] = m;
      }
      continue;
    }
    if (val == "true" || val == "false") {
      out[key] = (val == "true");
      continue;
    }
    long long i = 0;
    if (const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), i);
        ec == std::errc() && ptr == val.data() + val.size() && !val.empty()) {
      out[key] = i;
      continue;
    }
    double d = 0.0;
    if (detail::read_double(val, d)) {
      out[key] = d;
      continue;
    }
    out[key] = std::string(val);
  }
  return out;
}

}  // namespace liewe
