#pragma once

#include <stdexcept>
#include <string>

namespace lilx {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Result not representable as a plain double; use the log-domain variant.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// A series, sum or quadrature could not meet its requested error bound.
class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The tail-supremum exponent is infinite (threshold at or below 1).
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured memory cap would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lilx
