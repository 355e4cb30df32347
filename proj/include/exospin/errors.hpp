#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace exospin {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physical value violates its type invariant.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The potential needs a polarized test mass that the geometry lacks.
class GeometryMismatch : public Error {
 public:
  using Error::Error;
};

class UnknownPreset : public Error {
 public:
  using Error::Error;
};

class RepIntervalTooShort : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace exospin
