#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace unconfused {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Raised when a pivot falls below the singularity threshold.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class InvalidValue : public Error {
 public:
  using Error::Error;
};

class InvalidConfusion : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling could not make progress (margin too large, or a
/// resampling loop hit its attempt cap).
class GenerationStalled : public Error {
 public:
  using Error::Error;
};

class NoViableCandidate : public Error {
 public:
  using Error::Error;
};

class MissingLabels : public Error {
 public:
  using Error::Error;
};

class EmptyTestSet : public Error {
 public:
  using Error::Error;
};

class InvalidQuery : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line` is 1-based, 0 when not applicable.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace unconfused
