#pragma once

#include <stdexcept>
#include <string>

namespace gmdep {

// Invalid argument: parameter outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A numeric routine failed to reach its accuracy target (series cap hit,
// quadrature did not settle, all grid masses vanished, ...).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data (CSV parsing and friends).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gmdep
