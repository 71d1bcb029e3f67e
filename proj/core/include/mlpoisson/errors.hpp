#pragma once

#include <stdexcept>
#include <string>

namespace mlpoisson {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters outside the domain of the requested operation.
class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// An index (Stirling row, derivative order, ...) above its supported cap.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// A series hit its term cap before the stopping rule fired.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// A parameterization whose terms are not all nonnegative, so the
/// normalized weights are not a probability distribution.
class InvalidDistribution : public Error {
 public:
  InvalidDistribution(const std::string& what, std::size_t first_negative_k)
      : Error(what), first_negative_k_(first_negative_k) {}

  std::size_t first_negative_k() const noexcept { return first_negative_k_; }

 private:
  std::size_t first_negative_k_;
};

/// Arbitrary-precision evaluation still lost all significant digits after
/// the maximum number of precision doublings.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace mlpoisson
