#pragma once

#include <stdexcept>
#include <string>

namespace drotep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document (bad JSON, wrong types, unknown keys).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a model invariant. `field` names the
/// offending location, e.g. "scenarios[0].moments.mu_lower[1]".
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// The LP/MILP engine failed or returned a status the caller cannot use.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Vertex enumeration would exceed the configured cap.
class VertexCapExceeded : public Error {
 public:
  VertexCapExceeded(std::size_t required, std::size_t cap)
      : Error("vertex cap exceeded: box has " + std::to_string(required) +
              " vertices, cap is " + std::to_string(cap)),
        required_(required),
        cap_(cap) {}

  std::size_t required() const noexcept { return required_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t required_;
  std::size_t cap_;
};

/// The oracle kept hitting its dual-price bound after every allowed rescale.
class PriceBoundExhausted : public Error {
 public:
  PriceBoundExhausted(double last_bound, int escalations)
      : Error("oracle price bound exhausted after " +
              std::to_string(escalations) +
              " escalations (last bound " + std::to_string(last_bound) + ")"),
        last_bound_(last_bound) {}

  double last_bound() const noexcept { return last_bound_; }

 private:
  double last_bound_;
};

}  // namespace drotep
