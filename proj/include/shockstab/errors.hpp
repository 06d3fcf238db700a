#pragma once

#include <stdexcept>
#include <string>

namespace shockstab {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A state lies outside the model's admissible set.
class DomainError : public Error {
public:
  using Error::Error;
};

/// An evaluation produced a non-finite or undefined value.
class EvalError : public Error {
public:
  using Error::Error;
};

/// Failure of a spectral precondition: indefinite entropy Hessian,
/// loss of strict hyperbolicity, or a resonant shift.
class SpectralError : public Error {
public:
  using Error::Error;
};

/// Curve continuation could not proceed or a target was not bracketed.
class ContinuationError : public Error {
public:
  using Error::Error;
};

/// Expression syntax error; carries the 1-based source location.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line, int column)
      : Error(msg + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

/// Invalid configuration: unknown catalog name, bad parameter,
/// malformed config document, or failed construction-time validation.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace shockstab
