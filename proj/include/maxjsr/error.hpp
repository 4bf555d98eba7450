#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maxjsr {

/// Base of every error raised by the library.  The CLI maps the subclasses
/// onto exit codes (see ErrorCategory).
enum class ErrorCategory { input = 2, guard = 3, hypothesis = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what)
      : Error(ErrorCategory::input, "dimension mismatch: " + what) {}
};

class InvalidValueError : public Error {
 public:
  explicit InvalidValueError(const std::string& what)
      : Error(ErrorCategory::input, what) {}
};

/// Kleene star requested for a matrix whose cycle mean exceeds 1.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& what)
      : Error(ErrorCategory::guard, what) {}
};

/// Enumeration budget or factorial guard exceeded.
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what)
      : Error(ErrorCategory::guard, what) {}
};

/// A floating-point self-check failed; a smaller tolerance may help.
class ToleranceError : public Error {
 public:
  explicit ToleranceError(const std::string& what)
      : Error(ErrorCategory::guard, what) {}
};

class RetryExhaustedError : public Error {
 public:
  explicit RetryExhaustedError(const std::string& what)
      : Error(ErrorCategory::guard, what) {}
};

/// Mathematical hypothesis of an operation not met (irreducibility,
/// nonzero spectrum, differentiability).
class HypothesisError : public Error {
 public:
  explicit HypothesisError(const std::string& what)
      : Error(ErrorCategory::hypothesis, what) {}
};

class DegenerateSpectrumError : public HypothesisError {
 public:
  explicit DegenerateSpectrumError(const std::string& what)
      : HypothesisError(what) {}
};

class NondifferentiableError : public HypothesisError {
 public:
  explicit NondifferentiableError(const std::string& what)
      : HypothesisError(what) {}
};

/// File could not be parsed; carries the 1-based position of the offending
/// token when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(ErrorCategory::input, format(what, line, column)),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line,
                            std::size_t column) {
    if (line == 0) return what;
    return "line " + std::to_string(line) + ", column " +
           std::to_string(column) + ": " + what;
  }
  std::size_t line_;
  std::size_t column_;
};

}  // namespace maxjsr
