#pragma once

#include <stdexcept>
#include <string>

namespace qbm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical integral failed to reach its tolerance within the refinement cap.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved_error)
      : Error(what), achieved_error_(achieved_error) {}

  /// Relative error estimate reached before giving up.
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// The squeezed-bath mapping cannot be formed at this time.
class MappingError : public Error {
 public:
  using Error::Error;
};

/// Fock-space truncation is too small for the requested state or evolution.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int suggested_dim)
      : Error(what), suggested_dim_(suggested_dim) {}

  int suggested_dim() const noexcept { return suggested_dim_; }

 private:
  int suggested_dim_;
};

/// The time integrator could not advance (step-size underflow or step cap).
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double time)
      : Error(what), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// A phase-space grid cannot support the requested operation.
class GridError : public Error {
 public:
  using Error::Error;
};

/// A scenario file is malformed or incomplete.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qbm
