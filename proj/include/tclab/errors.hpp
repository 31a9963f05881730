#pragma once

#include <stdexcept>
#include <string>

namespace tclab {

// Base class for all library-specific failures. Precondition violations on
// plain arguments (negative step sizes, reversed intervals, ...) raise
// std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quadrature of 1/lambda did not converge: the model is not locally integrable.
class NonIntegrableSingularity : public Error {
 public:
  using Error::Error;
};

// An operation received a path of the wrong kind (e.g. refining a limit path).
class KindMismatch : public Error {
 public:
  using Error::Error;
};

// A requested time lies beyond what the simulated path or functional covers,
// or the adaptive extension hit its step cap.
class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

// A monotone functional failed to be strictly increasing (cannot be inverted).
class DegenerateFunctional : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

// The intensity model's regime does not match the requested limit family.
class RegimeMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigInvalid : public Error {
 public:
  ConfigInvalid(std::string field, const std::string& message)
      : Error("invalid config field '" + field + "': " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace tclab
