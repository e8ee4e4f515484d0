#pragma once

#include <stdexcept>
#include <string>

namespace agewave {

/// Bad model data or bad user input (CLI exit code 2).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical guarantee failed: CFL, ordering, convergence, invariant breach
/// (CLI exit code 3).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File system / parse trouble (CLI exit code 4).
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace agewave
