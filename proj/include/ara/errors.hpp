#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ara {

// Base of every error raised by the library. The CLI maps ParseError to exit
// code 2 and everything else to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad JSON, missing fields, out-of-range indices.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A game or instance violates a structural invariant.
class InvalidGameError : public Error {
 public:
  using Error::Error;
};

// The equality constraints of a game cannot be arranged into a partition.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// A search or enumeration ran past its configured cap.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public Error {
 public:
  using Error::Error;
};

// Raised when a domain fixer keeps failing after retry_cap fresh samples.
class SamplingFailure : public Error {
 public:
  SamplingFailure(const std::string& what, std::size_t failures)
      : Error(what), failures_(failures) {}
  std::size_t failures() const { return failures_; }

 private:
  std::size_t failures_;
};

}  // namespace ara
