#pragma once

#include <stdexcept>
#include <string>

namespace margo {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Coordinate sets or spaces that do not line up.
class CoordinateMismatch : public Error {
 public:
  explicit CoordinateMismatch(const std::string& what) : Error(what) {}
};

/// A value outside the domain of an operation (negative factor, bad bounds, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

/// A supplied elimination order does not have the running-intersection property.
class OrderError : public Error {
 public:
  explicit OrderError(const std::string& what) : Error(what) {}
};

/// An input fails a checked precondition (non measure-preserving map, non-embedding, ...).
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// A lattice map that is not of the form h -> h o f.
class NotCompositionOperator : public Error {
 public:
  explicit NotCompositionOperator(const std::string& what) : Error(what) {}
};

/// An internal postcondition failed. Always a bug.
class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what) : Error(what) {}
};

/// Malformed instance files.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(what) {}
};

}  // namespace margo
