#pragma once

#include <stdexcept>
#include <string>

namespace llab {

// Bad user input: distribution parameters, grid sizes, config files.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParameterError : InputError {
  using InputError::InputError;
};

struct GridError : InputError {
  using InputError::InputError;
};

struct DimensionError : InputError {
  using InputError::InputError;
};

struct ConfigError : InputError {
  ConfigError(const std::string& msg, int line = 0)
      : InputError(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line(line) {}
  int line;
};

// Numerical failure inside a solver.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularityError : SolverError {
  using SolverError::SolverError;
};

struct ConvergenceError : SolverError {
  using SolverError::SolverError;
};

struct WindowError : SolverError {
  using SolverError::SolverError;
};

}  // namespace llab
