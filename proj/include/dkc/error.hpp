#pragma once

#include <stdexcept>
#include <string>

namespace dkc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function (e.g. lambda <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Internal self-check failed (singular matching system, negative radicand, ...).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class BracketError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Step-size underflow in the ODE integrator. Carries the last accepted time.
class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& what, double last_good_time)
      : Error(what), last_good_time_(last_good_time) {}
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

/// The scaling factor collapsed to zero (over-kicked cloud focused to a point).
class FocusCrossing : public Error {
 public:
  FocusCrossing(const std::string& what, double time)
      : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace dkc
