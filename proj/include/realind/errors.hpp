// Exception types shared across the library.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace realind {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An operation left its supported domain (division through zero, empty
// interval, overflow to infinity, envelope queried past its horizon, ...).
struct DomainError : Error {
  using Error::Error;
};

// Bad arguments to a top-level operation (target below start, negative
// initial value, control shorter than the simulation horizon, ...).
struct InvalidInputError : Error {
  using Error::Error;
};

struct UnboundVariableError : Error {
  explicit UnboundVariableError(const std::string& name)
      : Error("unbound variable '" + name + "'"), variable(name) {}
  std::string variable;
};

struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t pos)
      : Error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
  std::size_t position;
};

// Malformed input text.
struct SyntaxError : ParseError {
  using ParseError::ParseError;
};

// Input uses a construct excluded from the closed-formula grammar
// (`<`, `not`, `exists`); such formulas may denote non-closed sets.
struct GrammarError : ParseError {
  using ParseError::ParseError;
};

// A coefficient enclosure violated its sign precondition.
struct CoefficientDomainError : Error {
  using Error::Error;
};

struct DenominatorTooSmallError : Error {
  using Error::Error;
};

// A sampled coefficient broke a sign hypothesis of the positivity argument.
struct CoefficientSignViolation : Error {
  using Error::Error;
};

struct ControlBoundViolated : Error {
  using Error::Error;
};

struct ControlTooShort : Error {
  using Error::Error;
};

struct MalformedTraceError : Error {
  using Error::Error;
};

}  // namespace realind
