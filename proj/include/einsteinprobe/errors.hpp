#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ep {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lexical or grammatical error in an expression or spec document.
/// `position` is a byte offset into the offending text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Runtime evaluation failure: division by zero, log of a non-positive
/// value, unbound parameter, and similar domain errors.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Structural problem with a manifold spec (dimension mismatch, inverted
/// domain interval, asymmetric metric entries, unknown catalog key, ...).
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Geometric degeneracy, most commonly a metric that is not positive
/// definite at an evaluation point.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Misuse of the stochastic layer (empty ensemble, bad start point, ...).
class StochasticError : public Error {
 public:
  using Error::Error;
};

/// A statistical test was invoked outside its hypothesis, e.g. the
/// positivity check on a form with a negative sampled eigenvalue.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

}  // namespace ep
