#pragma once

#include <stdexcept>
#include <string>

namespace cwig {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument hits a pole of Γ or a vanishing Pochhammer denominator.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Precondition violated (off-shell vector, out-of-range index, non-integrable field, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A series or quadrature failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration (CLI flags or JSON file).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File-system failure; the message carries the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cwig
