#pragma once

#include <stdexcept>
#include <string>

namespace spectile {

enum class ErrorKind {
  config,        // invalid parameters or inputs
  geometry,      // supports/intervals violate the window geometry
  contract,      // caller broke an operation precondition
  numeric,       // a numerical check or solve failed
  inconclusive,  // tails or budgets too large to decide
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::config, what) {}
};

class GeometryError : public Error {
 public:
  explicit GeometryError(const std::string& what)
      : Error(ErrorKind::geometry, what) {}
};

class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string& what)
      : Error(ErrorKind::contract, what) {}
};

class NumericFailure : public Error {
 public:
  explicit NumericFailure(const std::string& what)
      : Error(ErrorKind::numeric, what) {}
};

/// CLI exit code for an error category: 2 = config, 3 = numeric, 4 = inconclusive.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::geometry:
    case ErrorKind::contract:
      return 2;
    case ErrorKind::numeric:
      return 3;
    case ErrorKind::inconclusive:
      return 4;
  }
  return 3;
}

}  // namespace spectile
