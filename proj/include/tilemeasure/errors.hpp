#pragma once

#include <stdexcept>
#include <string>

namespace tilemeasure {

/// Invalid or degenerate geometric input (collinear polygon, non-orthogonal map, ...).
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A substitution system that is structurally malformed.
class SystemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested work exceeds the configured tile budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tilemeasure
