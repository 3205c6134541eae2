#pragma once

#include <stdexcept>
#include <string>

namespace entrain {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad parameter value (K <= 0, n_samples == 0, malformed config ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a function (e.g. sampled input queried out of range).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Dimension or shape mismatch between collaborating objects.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Transfer function evaluated at (or numerically at) a pole.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be Hurwitz is not.
class StabilityError : public Error {
 public:
  using Error::Error;
};

/// A block cascade cannot be assembled with the requested parts.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Adaptive step size fell below h_min.
class StiffnessError : public Error {
 public:
  StiffnessError(const std::string& what, double t) : Error(what), t_(t) {}
  [[nodiscard]] double time() const noexcept { return t_; }

 private:
  double t_;
};

/// State became non-finite; carries the last time at which it was finite.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double last_good_time)
      : Error(what), last_good_time_(last_good_time) {}
  [[nodiscard]] double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

/// Integration needed more than max_steps steps.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, double t) : Error(what), t_(t) {}
  [[nodiscard]] double time() const noexcept { return t_; }

 private:
  double t_;
};

/// Not enough data (time span, renormalization events) for a diagnostic.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Variable name not present in a system layout.
class UnknownVariableError : public Error {
 public:
  using Error::Error;
};

}  // namespace entrain
