#pragma once

#include <stdexcept>
#include <string>

namespace commlb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an enumeration or LP would exceed a configured size cap.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input (rationals, JSON documents).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid domain object (bad shape, index out of range,
/// rows not summing to one, non-factorizing outcome, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its domain (e.g. delta = 0 in pruning).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace commlb
