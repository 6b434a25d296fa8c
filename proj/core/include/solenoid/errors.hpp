#pragma once

#include <stdexcept>
#include <string>

namespace solenoid {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The map family violates one of the structural hypotheses (exit code 2 in
// the CLI). `hypothesis()` names the failed condition, e.g. "ν′ < λ′".
class SpecInvalid : public Error {
 public:
  SpecInvalid(std::string hypothesis, const std::string& detail)
      : Error("spec invalid: " + hypothesis + (detail.empty() ? "" : " (" + detail + ")")),
        hypothesis_(std::move(hypothesis)) {}
  const std::string& hypothesis() const noexcept { return hypothesis_; }

 private:
  std::string hypothesis_;
};

// An enumeration would exceed its resource cap (exit code 3 in the CLI).
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// A caller-side precondition was not met.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A backward word is too short to reach the requested coding tolerance.
class WordTooShort : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Malformed configuration or serialized input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace solenoid
