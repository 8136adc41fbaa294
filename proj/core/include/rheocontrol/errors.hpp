#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rheo {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad user input: configuration files, CLI arguments, malformed CSV data.
class ConfigError : public Error {
public:
  using Error::Error;
};

// A mathematical precondition was violated at evaluation time
// (point outside the domain, exponent outside its declared bounds, ...).
class EvalError : public Error {
public:
  using Error::Error;
};

// Mismatched grids or tensor dimensions between operands.
class ShapeError : public Error {
public:
  using Error::Error;
};

// The sparse linear core failed to factor or to reach its residual tolerance.
class LinearSolveError : public Error {
public:
  using Error::Error;
};

// The nonlinear fixed-point loop ran out of iterations.  Carries the
// per-iteration relative residuals so callers can inspect the stall.
class PicardDivergenceError : public Error {
public:
  PicardDivergenceError(const std::string& what, std::vector<double> history)
      : Error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

// The descent line search could not find an acceptable step.  Carries the
// objective values accepted so far.
class LineSearchError : public Error {
public:
  LineSearchError(const std::string& what, std::vector<double> history)
      : Error(what), objective_history(std::move(history)) {}
  std::vector<double> objective_history;
};

// Filesystem trouble: unreadable input, unwritable output.
class IoError : public Error {
public:
  using Error::Error;
};

// A certified runtime invariant failed (these indicate an internal bug,
// not bad input).
class InvariantViolation : public Error {
public:
  using Error::Error;
};

}  // namespace rheo
