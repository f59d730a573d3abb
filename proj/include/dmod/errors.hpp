#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dmod {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatch: non-square determinant, ragged input, bad index.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Input is well-formed but outside the domain of the operation
/// (rank-zero matrix for delta, vector not spanned, degenerate spike rank).
class DomainError : public Error {
public:
  using Error::Error;
};

/// An exhaustive search would exceed its configured budget.
class BudgetExceeded : public Error {
public:
  using Error::Error;
};

/// Malformed matrix text. `line` counts data rows from 1 (the header is 0);
/// `token` is 1-based, 0 when not applicable.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line, std::size_t token)
      : Error(what), line_(line), token_(token) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t token() const noexcept { return token_; }

private:
  std::size_t line_;
  std::size_t token_;
};

} // namespace dmod
