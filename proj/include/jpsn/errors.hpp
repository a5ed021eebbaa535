#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jpsn {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A factorization or solve failed, or a result is not finite.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text; `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// A sampler could not start from its initial state.
class InitializationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace jpsn
