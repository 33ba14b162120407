#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hermgen {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes, ranges, or matrix properties that violate a documented precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A computation produced or met a non-finite value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Root isolation in the quadrature builder did not converge.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, int node_index)
      : NumericalError(what), node_index_(node_index) {}
  int node_index() const noexcept { return node_index_; }

 private:
  int node_index_;
};

class InsufficientSampleError : public Error {
 public:
  using Error::Error;
};

// Online training hit a non-finite loss or parameter.
class TrainingAborted : public Error {
 public:
  TrainingAborted(const std::string& what, std::int64_t step)
      : Error(what), step_(step) {}
  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

}  // namespace hermgen
