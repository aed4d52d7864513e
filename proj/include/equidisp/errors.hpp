#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace equidisp {

// Base class for every runtime failure of the numeric machinery, so callers
// that only care about fit/no-fit can catch a single type.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Integrand returned NaN/Inf, or an objective returned NaN.
struct EvaluationError : NumericError {
  using NumericError::NumericError;
};

// Quadrature window growth exhausted without the integrand decaying.
struct TailTruncationError : NumericError {
  using NumericError::NumericError;
};

// Root bracket does not satisfy g(lo) > 0 > g(hi).
struct BracketError : NumericError {
  using NumericError::NumericError;
};

// Optimizer hit a non-finite objective; carries the offending point.
struct SearchError : NumericError {
  SearchError(const std::string& msg, std::vector<double> where)
      : NumericError(msg), point(std::move(where)) {}
  std::vector<double> point;
};

// Sample admits no estimate (all zero, constant column, singular covariance).
struct DegenerateSampleError : NumericError {
  using NumericError::NumericError;
};

// Rejection sampler acceptance rate collapsed.
struct SamplerStallError : NumericError {
  using NumericError::NumericError;
};

// Pseudo-model link tau(x) vanished at an evaluation point.
struct SingularLinkError : NumericError {
  using NumericError::NumericError;
};

// Requested density grid exceeds the size cap.
struct GridSizeError : NumericError {
  using NumericError::NumericError;
};

// Operation precondition on the model was violated (e.g. invalid coefficient
// matrix where a valid one is required).
struct InvalidModelError : NumericError {
  using NumericError::NumericError;
};

// CSV ingestion failure; carries offending line numbers for diagnostics.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::vector<std::size_t> lines = {})
      : std::runtime_error(msg), line_numbers(std::move(lines)) {}
  std::vector<std::size_t> line_numbers;
};

}  // namespace equidisp
