#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcula {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  DimensionMismatch(const std::string& where, long expected, long got);
};

/// Dykstra iteration for an intersection did not converge (strict mode only).
class ProjectionNotConverged : public Error {
 public:
  using Error::Error;
};

/// A chain produced a non-finite position.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(std::uint64_t step);
  std::uint64_t step() const noexcept { return step_; }

 private:
  std::uint64_t step_;
};

/// Aggregated configuration validation failure.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> messages);
  const std::vector<std::string>& messages() const noexcept { return messages_; }

 private:
  std::vector<std::string> messages_;
};

}  // namespace pcula
