#ifndef JTBOUND_ERRORS_HPP_
#define JTBOUND_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace jtb {

// Base class for every error raised by the library.  Each subclass maps to
// one CLI exit-code class.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (model files, family specs).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Input parsed but violates a model invariant (negative table entry,
// unsorted scope, uncovered variable, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Shape disagreement between objects that must line up (vertex count vs
// kernel count, distributions over different spaces).
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Joint state space or enumeration family exceeds a configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Every assignment has zero weight, or a message collapsed to all zeros.
class DegenerateModelError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace jtb

#endif  // JTBOUND_ERRORS_HPP_
