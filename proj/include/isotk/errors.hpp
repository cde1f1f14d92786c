#pragma once

#include <stdexcept>
#include <string>

namespace isotk {

// Base for everything thrown by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad caller input: dimension mismatches, degenerate bodies, malformed specs.
struct InvalidInput : Error {
  explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

// Numerical breakdown: solver non-convergence, detected divergence, etc.
struct NumericError : Error {
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

}  // namespace isotk
