#ifndef REION_ERRORS_HPP
#define REION_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace reion {

// Malformed argument to a pure function (negative angular momentum, mixed
// selection-rule kinds, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Violated precondition between modules (non-Hermitian input, non-degenerate
// doublet handed to the g-factor extractor, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Inconsistent physical configuration (missing reduced matrix element,
// zero g-factor, ...).
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested magnetic phase has no model (intermediate phase).
class UnmodeledPhaseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Eigenstate carries equal weight in both irrep classes.
class AmbiguousIrrepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text input error with a 1-based source location.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, int line, int column, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        source_(std::move(source)),
        line_(line),
        column_(column) {}

  const std::string& source() const noexcept { return source_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  std::string source_;
  int line_;
  int column_;
};

}  // namespace reion

#endif  // REION_ERRORS_HPP
