#pragma once

#include <stdexcept>
#include <string>

namespace k3lat {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Matrix dimensions incompatible with the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Matrix has the right dimensions but the wrong structure (e.g. not symmetric).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A configured enumeration bound would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input (polynomial literals, lattice names, JSON files).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace k3lat
