#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gibbs {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: model specs, parameters, configuration, grids.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public InvalidArgument {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : InvalidArgument(message + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public ParseError {
 public:
  UnknownIdentifier(const std::string& name, std::size_t offset)
      : ParseError("unknown identifier '" + name + "'", offset), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class UnsupportedDerivative : public InvalidArgument {
 public:
  explicit UnsupportedDerivative(const std::string& function)
      : InvalidArgument("derivative of " + function + " is not supported"), function_(function) {}
  const std::string& function() const noexcept { return function_; }

 private:
  std::string function_;
};

// The requested computation does not apply to the model's regime.
class RegimeMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class OverlappingIntervals : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class EmptyGrid : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class EmptyPartition : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Numerical failures: the inputs were well formed but the computation could not
// produce a certified answer.
class NumericError : public Error {
 public:
  using Error::Error;
};

class RangeError : public NumericError {
 public:
  using NumericError::NumericError;
};

class NoRoot : public NumericError {
 public:
  using NumericError::NumericError;
};

class DivergentSeries : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonConvergedTail : public NumericError {
 public:
  using NumericError::NumericError;
};

class InconclusiveLimit : public NumericError {
 public:
  InconclusiveLimit(const std::string& what, std::string probe_table)
      : NumericError("inconclusive limit: " + what), probe_table_(std::move(probe_table)) {}
  const std::string& probe_table() const noexcept { return probe_table_; }

 private:
  std::string probe_table_;
};

}  // namespace gibbs
