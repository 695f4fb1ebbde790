#pragma once

#include <stdexcept>
#include <string>

namespace ahvol {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Gamma function evaluated at a nonpositive integer.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Warp description that fails positivity or asymptotic checks.
class InvalidWarpError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved_tolerance() const { return achieved_; }

 private:
  double achieved_;
};

/// Adaptive integrator step size collapsed.
class StiffnessError : public Error {
 public:
  using Error::Error;
};

/// Frobenius start point lies outside the trusted radius of the pole series.
class SeriesStartError : public Error {
 public:
  using Error::Error;
};

class IllConditionedFitError : public Error {
 public:
  using Error::Error;
};

class InadmissibleTrialError : public Error {
 public:
  using Error::Error;
};

/// Two independent formulas for the same quantity disagree.
class CrossCheckError : public Error {
 public:
  using Error::Error;
};

}  // namespace ahvol
