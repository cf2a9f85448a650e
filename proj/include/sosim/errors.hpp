#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace sosim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: parameters out of range, malformed config, tag mismatch.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class InvalidRepresentation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidState : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnsupportedRegime : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Base for failures of the numerics rather than of the input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The Fock truncation cannot hold the requested state.
class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, double deficit)
      : NumericalError(what + " (norm deficit " + format_deficit(deficit) + ")"),
        deficit_(deficit) {}
  double deficit() const noexcept { return deficit_; }

 private:
  static std::string format_deficit(double d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", d);
    return buf;
  }

  double deficit_;
};

class IntegrationFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace sosim
