#pragma once

#include <stdexcept>
#include <string>

namespace uplink {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameter value or combination (negative intensity, l > k, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of a density (negative distance, ...).
class DomainError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// Quadrature failure, non-finite evaluation, or a probability outside [0, 1].
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A point-process sample too small for the requested operation.
class InsufficientSampleError : public Error {
 public:
  using Error::Error;
};

// Rejection sampler ran out of proposals.
class SamplingError : public Error {
 public:
  SamplingError(const std::string& what, long proposals)
      : Error(what + " (after " + std::to_string(proposals) + " proposals)"),
        proposals_(proposals) {}
  long proposals() const noexcept { return proposals_; }

 private:
  long proposals_;
};

// Simulation configuration that cannot produce valid realizations.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

}  // namespace uplink
