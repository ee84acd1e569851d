#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hmlkit {

// Root of every exception thrown by hmlkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t line, std::size_t column);

  const std::string& message() const noexcept { return message_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

// A caller passed an id, label or argument that is not valid for the object
// it was used with.
class UsageError : public Error {
 public:
  using Error::Error;
};

// FiniteLts construction rejected its input.
class LtsError : public Error {
 public:
  using Error::Error;
};

// A formula could not be evaluated against an LTS (unknown label, height
// guard exceeded).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// A configured budget or safety cap was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// An internal self-check failed. Seeing one of these is a bug in hmlkit.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace hmlkit
