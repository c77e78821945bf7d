#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nagata {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad parameters, inconsistent data, unparsable files.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
  ValidationError(const std::string& what, std::vector<std::string> fields)
      : Error(what), fields_(std::move(fields)) {}

  const std::vector<std::string>& fields() const noexcept { return fields_; }

 private:
  std::vector<std::string> fields_;
};

/// Vector or tensor arity does not match the algebra/model dimension.
class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A computation was cut because it would exceed its resource budget.
/// `radius_reached` is the last radius that was completed exactly.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, int radius_reached)
      : Error(what), radius_reached_(radius_reached) {}

  int radius_reached() const noexcept { return radius_reached_; }

 private:
  int radius_reached_;
};

/// A claimed geometric property was found to be violated; carries the offending
/// carrier index when there is one.
class WitnessError : public Error {
 public:
  WitnessError(const std::string& what, std::size_t witness)
      : Error(what), witness_(witness) {}

  std::size_t witness() const noexcept { return witness_; }

 private:
  std::size_t witness_;
};

}  // namespace nagata
