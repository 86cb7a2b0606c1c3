#pragma once

#include <stdexcept>
#include <string>

namespace stieltjes {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Gamma function evaluated at a nonpositive integer.
class PoleError : public DomainError {
public:
  using DomainError::DomainError;
};

/// A parameter inequality required by a construction is violated
/// (e.g. r > |k| for TM1 perturbations).
class ConstraintError : public Error {
public:
  using Error::Error;
};

/// Numerical failures: quadrature that does not converge, contour
/// truncation that leaves too much mass behind, etc.
class NumericError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public NumericError {
public:
  using NumericError::NumericError;
};

class TruncationError : public NumericError {
public:
  using NumericError::NumericError;
};

class SymmetryError : public NumericError {
public:
  using NumericError::NumericError;
};

/// Positivity bound search found an apparently unbounded ratio.
class SearchError : public NumericError {
public:
  using NumericError::NumericError;
};

/// A classification landed inside its dead zone.
class UndecidedError : public Error {
public:
  using Error::Error;
};

class InconclusiveError : public Error {
public:
  using Error::Error;
};

/// Criteria were requested for a density that does not reproduce the
/// moment sequence.
class RefusesError : public Error {
public:
  using Error::Error;
};

/// Verdicts that contradict each other (a theorem-level inconsistency).
class ConsistencyError : public Error {
public:
  using Error::Error;
};

/// Malformed textual input (sequence descriptors, ranges, grids).
class ParseError : public Error {
public:
  using Error::Error;
};

} // namespace stieltjes
