#pragma once

#include <stdexcept>
#include <string>

namespace hg {

/// Base class for all library errors. `category()` returns a stable,
/// machine-readable tag that the CLI maps to exit codes.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(message), category_(std::move(category)) {}

  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

/// Degenerate or inconsistent geometry (zero area, repeated vertices, ...).
class GeometryError : public Error {
 public:
  explicit GeometryError(const std::string& message) : Error("geometry", message) {}
};

/// Bilinear reference map is not invertible where it was sampled (det J <= 0).
class InvalidMapError : public Error {
 public:
  explicit InvalidMapError(const std::string& message) : Error("invalid_map", message) {}
};

/// A closed-form tau policy was asked for on an element of the wrong shape.
class ShapeMismatchError : public Error {
 public:
  explicit ShapeMismatchError(const std::string& message) : Error("shape_mismatch", message) {}
};

/// Invalid argument values (preconditions on counts, amplitudes, tolerances).
class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(const std::string& message) : Error("invalid_argument", message) {}
};

/// Linear solver failed to reach the requested tolerance.
class SolverError : public Error {
 public:
  explicit SolverError(const std::string& message) : Error("solver", message) {}
};

/// File input/output failure.
class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io", message) {}
};

}  // namespace hg
