#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace liewe {

/// Failure categories. Each maps to a stable identifier used by the CLI.
enum class Errc {
  structural,          // shape or length mismatch
  numeric_input,       // NaN / Inf in the input
  metric,              // metric not symmetric or not positive definite
  dimension,           // operation needs n >= 3
  input,               // parameter outside its admissible range
  hint,                // user-supplied ideal basis is not a codim-1 abelian ideal
  precondition,        // mathematical precondition of an operation is violated
  not_almost_abelian,  // no codimension-1 abelian ideal
  classification,      // no normal form exists for the input
  consistency,         // two independent computation routes disagree
  parse_header,
  parse_directive,
  parse_number,
  parse_index,
  parse_self_bracket,
  parse_duplicate_bracket,
  parse_metric_symmetry,
  parse_metric_spd,
  parse_jacobi,
  parse_incomplete,
  io,
  usage,
};

constexpr std::string_view errc_id(Errc e) {
  switch (e) {
    case Errc::structural: return "E_STRUCTURAL";
    case Errc::numeric_input: return "E_NUMERIC_INPUT";
    case Errc::metric: return "E_METRIC";
    case Errc::dimension: return "E_DIMENSION";
    case Errc::input: return "E_INPUT";
    case Errc::hint: return "E_HINT";
    case Errc::precondition: return "E_PRECONDITION";
    case Errc::not_almost_abelian: return "E_NOT_ALMOST_ABELIAN";
    case Errc::classification: return "E_CLASSIFICATION";
    case Errc::consistency: return "E_CONSISTENCY";
    case Errc::parse_header: return "E_PARSE_HEADER";
    case Errc::parse_directive: return "E_PARSE_DIRECTIVE";
    case Errc::parse_number: return "E_PARSE_NUMBER";
    case Errc::parse_index: return "E_PARSE_INDEX";
    case Errc::parse_self_bracket: return "E_PARSE_SELF_BRACKET";
    case Errc::parse_duplicate_bracket: return "E_PARSE_DUPLICATE_BRACKET";
    case Errc::parse_metric_symmetry: return "E_PARSE_METRIC_SYMMETRY";
    case Errc::parse_metric_spd: return "E_PARSE_METRIC_SPD";
    case Errc::parse_jacobi: return "E_PARSE_JACOBI";
    case Errc::parse_incomplete: return "E_PARSE_INCOMPLETE";
    case Errc::io: return "E_IO";
    case Errc::usage: return "E_USAGE";
  }
  return "E_UNKNOWN";
}

/// Domain errors are mathematical verdicts on well-formed input (exit code 1);
/// everything else is an input problem (exit code 2).
constexpr bool is_domain_error(Errc e) {
  return e == Errc::precondition || e == Errc::not_almost_abelian ||
         e == Errc::classification || e == Errc::consistency;
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, int line = 0)
      : std::runtime_error(what), code_(code), line_(line) {}

  Errc code() const noexcept { return code_; }
  /// 1-based source line for parse errors, 0 otherwise.
  int line() const noexcept { return line_; }

 private:
  Errc code_;
  int line_;
};

}  // namespace liewe
