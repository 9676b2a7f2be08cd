#pragma once

#include <stdexcept>
#include <string>

namespace qsocount {

// Every domain failure raised by the library. The code is module-qualified,
// e.g. "model.syntax" or "eval.budget", and is what the CLI reports.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Parse failure with a 1-based source position (column 0 when unknown).
class ParseError : public Error {
 public:
  ParseError(std::string code, const std::string& message, int line, int column = 0)
      : Error(std::move(code), format(message, line, column)), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& message, int line, int column) {
    std::string where = "line " + std::to_string(line);
    if (column > 0) where += ", column " + std::to_string(column);
    return where + ": " + message;
  }

  int line_;
  int column_;
};

}  // namespace qsocount
