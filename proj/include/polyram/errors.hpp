#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polyram {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input lies outside the domain of the operation (non-prime p, k+s <= 1, zero polynomial where a nonzero one is
/// required, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed input text. `position` is the 0-based offset of the offending character, or npos when the error is
/// not tied to one.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what), position_(std::string::npos) {}
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// An enumeration would exceed the configured tuple budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An identity that must hold by construction was violated; signals an implementation bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace polyram
