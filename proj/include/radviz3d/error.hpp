#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace radviz {

// Bad input: malformed data, unsupported sizes, inconsistent arguments.
// The CLI maps these to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical or calibration failure on otherwise valid input (exit code 3).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedCardinality : public InputError {
 public:
  using InputError::InputError;
};

class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};

class NegativeInput : public InputError {
 public:
  using InputError::InputError;
};

class SingleClass : public InputError {
 public:
  using InputError::InputError;
};

class InvalidSpec : public InputError {
 public:
  using InputError::InputError;
};

class InvalidScale : public InputError {
 public:
  using InputError::InputError;
};

class MissingColumn : public InputError {
 public:
  using InputError::InputError;
};

class TooFewFeatures : public InputError {
 public:
  using InputError::InputError;
};

class TemplateMissing : public InputError {
 public:
  using InputError::InputError;
};

class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t row, std::string column, const std::string& what)
      : InputError("row " + std::to_string(row) + ", column '" + column + "': " + what),
        row_(row),
        column_(std::move(column)) {}

  // 1-based data row (the header is row 0).
  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

class DegenerateSet : public NumericError {
 public:
  using NumericError::NumericError;
};

class TargetUnreachable : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace radviz
