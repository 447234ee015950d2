#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gcorr {

/// Base class for all gcorr errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad inputs: shape mismatches, out-of-range parameters, unparseable files.
/// The CLI maps these to exit code 2.
struct ValidationError : Error {
  using Error::Error;
};

/// Numerically degenerate situations detected at runtime.
/// The CLI maps these to exit code 3.
struct NumericError : Error {
  using Error::Error;
};

struct DimensionMismatchError : ValidationError {
  using ValidationError::ValidationError;
};

struct DegenerateMarginalError : ValidationError {
  using ValidationError::ValidationError;
};

struct RhoOutOfRangeError : ValidationError {
  using ValidationError::ValidationError;
};

struct InvalidCovarianceError : ValidationError {
  using ValidationError::ValidationError;
};

struct TooFewSamplesError : ValidationError {
  using ValidationError::ValidationError;
};

struct EmptyIntersectionError : ValidationError {
  using ValidationError::ValidationError;
};

struct ParseError : ValidationError {
  ParseError(const std::string& msg, std::size_t line)
      : ValidationError(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
  std::size_t line_number;
};

struct AllZeroMatrixError : NumericError {
  using NumericError::NumericError;
};

struct ConstantInputError : NumericError {
  using NumericError::NumericError;
};

struct EigenFailureError : NumericError {
  using NumericError::NumericError;
};

struct DegenerateClusterError : NumericError {
  using NumericError::NumericError;
};

/// Emits a diagnostic for recoverable input oddities (e.g. a nonzero diagonal
/// that gets forced back to zero). Writes to stderr.
void warn(const std::string& message);

}  // namespace gcorr
