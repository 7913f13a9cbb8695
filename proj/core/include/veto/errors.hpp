#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace veto {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed ballot, weight or matching input. `line()` is 1-based, 0 when
/// the input has no line structure.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An instance exceeds a configured size limit (enumeration or LP size).
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace veto
