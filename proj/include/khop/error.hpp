#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace khop {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates a model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Unknown node label, node index or edge.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation precondition (e.g. re-inviting a user).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Quantity undefined for the given arguments (zero denominators, bad domain).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Exact enumeration refused because the instance exceeds the configured cap.
class EnumerationTooLarge : public Error {
 public:
  using Error::Error;
};

/// Budget request that no allocation can satisfy.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace khop
