#pragma once

#include <stdexcept>
#include <string>

namespace blp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidProblem : public Error {
 public:
  using Error::Error;
};

// Problem file could be parsed but violates the data-model invariants.
class ValidationError : public InvalidProblem {
 public:
  using InvalidProblem::InvalidProblem;
};

class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& message)
      : Error("parse error in field '" + field + "': " + message),
        field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

class NodeLimitExceeded : public Error {
 public:
  using Error::Error;
};

class LowerLevelUnbounded : public Error {
 public:
  using Error::Error;
};

class LowerLevelInfeasible : public Error {
 public:
  using Error::Error;
};

class EmptyRayCut : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace blp
