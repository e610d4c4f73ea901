#pragma once

#include <stdexcept>
#include <string>

namespace fusion {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An argument is outside its mathematical domain (NaN, probability out of
/// range, dimension mismatch, degenerate channel, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

/// The request is valid but beyond what this implementation supports
/// (e.g. joint-law enumeration above K = 20).
class CapabilityError : public Error {
 public:
  explicit CapabilityError(const std::string& what) : Error(what) {}
};

/// A numerical procedure failed: pole hit, quadrature node blew up,
/// bisection bracket does not contain the target, degenerate objective.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

}  // namespace fusion
