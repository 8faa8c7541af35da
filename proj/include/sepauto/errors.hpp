#pragma once

#include <stdexcept>
#include <string>

namespace sepauto {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension or slot mismatch between an operator and a tensor shape.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Input that should be Hermitian (or a density operator) is not.
class NotHermitianError : public Error {
 public:
  using Error::Error;
};

class NotDensityError : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents.
class ParseError : public Error {
 public:
  using Error::Error;
};

class NonInvertibleError : public Error {
 public:
  using Error::Error;
};

/// A certified quantity failed its own self-check (e.g. an inscribed ball radius).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Exact separability decision requested for a shape where PPT is only necessary.
class UnsupportedShapeError : public Error {
 public:
  using Error::Error;
};

class InputMissingError : public Error {
 public:
  using Error::Error;
};

class OutputError : public Error {
 public:
  using Error::Error;
};

/// Per-factor map is not a unitary conjugation or permutation is not admissible.
class InvalidAutomorphismError : public Error {
 public:
  using Error::Error;
};

}  // namespace sepauto
