#pragma once

#include <stdexcept>
#include <string>

namespace dcs {

// Requested resolution cannot be represented on the available grid.
struct ResolutionError : std::runtime_error {
  explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

// A tie or other measure-zero configuration was actually hit; reported
// instead of silently resolved.
struct DegeneratePathError : std::runtime_error {
  explicit DegeneratePathError(const std::string& what) : std::runtime_error(what) {}
};

// A numeric routine failed to reach its requested tolerance.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// An internal invariant that must hold by construction was violated.
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace dcs
