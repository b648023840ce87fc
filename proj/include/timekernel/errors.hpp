#pragma once

#include <stdexcept>
#include <string>

namespace timekernel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A value would violate its type's invariant (e.g. alpha + beta != 1).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// A series term is outside the shape an operation accepts.
class MalformedSeriesError : public Error {
 public:
  using Error::Error;
};

/// Negative hbar grade found while taking a classical limit.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Two independent computations of the same quantity disagreed.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Successive approximation ran out of iterations.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double final_delta, int iterations)
      : Error(what), final_delta_(final_delta), iterations_(iterations) {}

  double final_delta() const noexcept { return final_delta_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double final_delta_;
  int iterations_;
};

/// Malformed input document; `field` is a dotted path into the document.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace timekernel
