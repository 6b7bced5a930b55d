#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gae {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not satisfy an operation's shape rule.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A value lies outside an operation's mathematical domain (log of a
/// non-positive number, a probability at exactly 0 or 1, a non-finite result).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Interpolation endpoints with no well-defined great circle.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

/// A fixed-point iteration failed to converge within its cap.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text or bytes. `position` is a byte offset for binary
/// formats and a 1-based line number for text formats.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class ChecksumError : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

}  // namespace gae
