#pragma once

#include <stdexcept>
#include <string>

namespace cylcs {

// Invalid user input: bad parameters, malformed files, sigma out of range.
// The CLI maps these to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Base for failures of a numerical procedure on otherwise valid input.
// The CLI maps these to exit code 1.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureNotConverged : public NumericError {
 public:
  using NumericError::NumericError;
};

// The symmetric basis window [-N, N] misses more than the allowed tail mass.
class TruncationInsufficient : public NumericError {
 public:
  using NumericError::NumericError;
};

// A series cutoff leaves tail terms above tolerance.
class CutoffInsufficient : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonHermitianHamiltonian : public NumericError {
 public:
  using NumericError::NumericError;
};

class DenominatorVanishes : public NumericError {
 public:
  using NumericError::NumericError;
};

// N^sigma(J) is zero or underflows at the requested action value.
class NormalizationVanishes : public NumericError {
 public:
  using NumericError::NumericError;
};

class DimensionMismatch : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace cylcs
