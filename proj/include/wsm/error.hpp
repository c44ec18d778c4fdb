#pragma once

#include <stdexcept>
#include <string>

namespace wsm {

// Numeric values are shared with the C API status codes in wsm.h.
enum class ErrorCode : int {
  invalid_arity = 10,
  dimension_mismatch = 11,
  invalid_argument = 12,
  parse_error = 13,
  mode_error = 14,
  window_error = 15,
  nonpositive_weight = 16,
  sign_convention = 17,
  structural_error = 18,
  scenario_error = 19,
  not_hermitian = 20,
  overflow = 21,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Polynomial grammar failures carry the 1-based position of the offending character.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(ErrorCode::parse_error, what + " at line " + std::to_string(line) + ", column " +
                                          std::to_string(column)),
        line_(line),
        column_(column) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace wsm
