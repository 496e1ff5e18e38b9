#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace roadq {

enum class ErrorKind {
  Domain,
  Config,
  SingularModel,
  Convergence,
  Oracle,
  Io,
  Internal,
};

// Base of everything the core throws. The C API maps kind() onto status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(ErrorKind::Config, "config field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A state with zero total service rate while arrivals are positive; the
// stationary law does not exist as a proper distribution.
class SingularModelError : public Error {
 public:
  explicit SingularModelError(std::size_t state)
      : Error(ErrorKind::SingularModel,
              "zero service rate at state " + std::to_string(state) +
                  " with positive arrival rate (use the shifted convention)"),
        state_(state) {}
  std::size_t state() const noexcept { return state_; }

 private:
  std::size_t state_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double lo, double hi)
      : Error(ErrorKind::Convergence, what), lo_(lo), hi_(hi) {}
  double bracket_lo() const noexcept { return lo_; }
  double bracket_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

class OracleError : public Error {
 public:
  explicit OracleError(const std::string& what) : Error(ErrorKind::Oracle, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorKind::Internal, what) {}
};

}  // namespace roadq
