#pragma once

#include <stdexcept>
#include <string>

namespace zollfunk {

/// Thrown when an iteration fails to converge or a matrix is numerically
/// singular; the CLI maps it to exit code 1.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on violated preconditions and malformed inputs; exit code 2.
struct UsageError : std::invalid_argument {
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace zollfunk
