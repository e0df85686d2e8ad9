#pragma once

#include <stdexcept>
#include <string>

namespace ifslab {

// Base of every error thrown by the library. Callers that only need to
// distinguish "bad input" from "ran out of symbols" can catch the subclasses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent dimensions between two geometric objects.
class DimensionError : public Error {
 public:
  DimensionError(std::size_t expected, std::size_t got, const std::string& where)
      : Error(where + ": dimension mismatch (expected " + std::to_string(expected) +
              ", got " + std::to_string(got) + ")"),
        expected_(expected),
        got_(got) {}

  std::size_t expected() const noexcept { return expected_; }
  std::size_t got() const noexcept { return got_; }

 private:
  std::size_t expected_;
  std::size_t got_;
};

// A value violates a construction-time invariant (zero normal, NaN
// coordinate, non-bijective permutation, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Symbol outside 1..N.
class SymbolError : public Error {
 public:
  using Error::Error;
};

// A finite (Custom) driver was asked for more symbols than it holds.
class DriverExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace ifslab
