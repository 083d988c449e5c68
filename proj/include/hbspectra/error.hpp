#pragma once

#include <stdexcept>
#include <string>

namespace hbspectra {

// Base for every error raised by the library. Subclasses map onto the CLI
// exit-code contract (1 validation, 2 property falsified, 3 I/O or parse).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a precondition: malformed spec, dimension mismatch,
// non-stochastic matrix, cap exceeded, and so on.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A property that should hold by construction was observed to fail.
class PropertyFalsified : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant; indicates a bug in this library.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hbspectra
