#pragma once

#include <stdexcept>
#include <string>

namespace billiards {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A shape or physics parameter outside its admissible range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Argument outside the supported numerical envelope of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Violated precondition between cooperating objects (mismatched grids,
/// unnormalized fields, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

class NotSingularError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

}  // namespace billiards
