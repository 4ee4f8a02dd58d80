#pragma once

#include <stdexcept>
#include <string>

namespace nframe {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: dimension or length mismatch, non-finite entries.
class InputError : public Error {
 public:
  using Error::Error;
};

// Anchor vectors are linearly dependent (Gram determinant below the rank threshold).
class DegenerateAnchorError : public Error {
 public:
  using Error::Error;
};

// Round-off pushed a quantity outside its admissible range.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// The family is not a frame, so its frame operator cannot be inverted.
class SingularFrameOperatorError : public Error {
 public:
  using Error::Error;
};

// Operator outside the domain of a spectral function (asymmetric, indefinite).
class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Randomized generation exhausted its retry budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

}  // namespace nframe
