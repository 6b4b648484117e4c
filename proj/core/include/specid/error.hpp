#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace specid {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold for the given
// (otherwise well-formed) input, e.g. a model state that is not a fixed point.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class DegenerateData : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int step)
      : Error(what), step_(step) {}
  int step() const noexcept { return step_; }

 private:
  int step_;
};

// The moment recursion cannot proceed because M_k(BC^T) vanishes.
class InfeasibleMoment : public Error {
 public:
  InfeasibleMoment(const std::string& what, int k) : Error(what), k_(k) {}
  int order() const noexcept { return k_; }

 private:
  int k_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Wraps a failure inside a pipeline stage; what() is prefixed with the stage.
class StageFailure : public Error {
 public:
  StageFailure(std::string stage, const std::string& what)
      : Error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace specid
