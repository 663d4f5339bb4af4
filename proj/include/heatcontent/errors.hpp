#pragma once

#include <stdexcept>
#include <string>

namespace heatcontent {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arguments outside the region where an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Evaluation at (or within the refusal radius of) a pole.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Quadrature or series that did not reach its requested tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A truncation that would need more terms than the configured cap allows.
class ToleranceError : public Error {
 public:
  using Error::Error;
};

}  // namespace heatcontent
