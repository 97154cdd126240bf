#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gapdense {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad configuration or input: JSON schema violations, malformed flags,
// malformed numeric literals.
struct ConfigError : Error {
  using Error::Error;
};

struct SyntaxError : Error {
  std::size_t offset;
  SyntaxError(const std::string& what, std::size_t off)
      : Error(what + " at byte " + std::to_string(off)), offset(off) {}
};

struct UnknownIdentifierError : SyntaxError {
  UnknownIdentifierError(const std::string& name, std::size_t off)
      : SyntaxError("unknown identifier '" + name + "'", off) {}
};

// The working precision cannot resolve the requested computation
// (lost Cholesky pivot, vanished recurrence norm, failed cross-check).
struct PrecisionExhausted : Error {
  using Error::Error;
};

// A measure atom sits on a zero of the t-factor.
struct AtomAtZeroOfT : Error {
  using Error::Error;
};

struct QuadratureError : Error {
  using Error::Error;
};

struct DivisionByNegligible : Error {
  using Error::Error;
};

struct BracketingError : Error {
  using Error::Error;
};

// Precondition violations that are neither precision nor measure-shape issues.
struct DomainError : Error {
  using Error::Error;
};

}  // namespace gapdense
