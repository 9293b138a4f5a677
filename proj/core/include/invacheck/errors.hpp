// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace invacheck {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Expression parsing failed; `position` is a byte offset into the input.
struct SyntaxError : Error {
  SyntaxError(std::size_t position, const std::string& message)
      : Error("syntax error at position " + std::to_string(position) + ": " + message),
        position(position) {}
  std::size_t position;
};

struct DimensionError : Error {
  using Error::Error;
};

struct NotPositiveDefinite : Error {
  using Error::Error;
};

struct NoConvergence : Error {
  using Error::Error;
};

struct ArithmeticError : Error {
  using Error::Error;
};

struct EmptyRegion : Error {
  using Error::Error;
};

struct NoBoundaryFound : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct NegativeEntries : Error {
  using Error::Error;
};

struct NegativeBeta : Error {
  using Error::Error;
};

struct NegativeAlpha : Error {
  using Error::Error;
};

struct OriginNotInterior : Error {
  using Error::Error;
};

struct UsageError : Error {
  using Error::Error;
};

}  // namespace invacheck
