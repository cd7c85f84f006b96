#pragma once

#include <stdexcept>
#include <string>

namespace nilforms {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Syntax errors and unknown identifiers. Positions are 1-based.
struct ParseError : Error {
  int line;
  int column;
  ParseError(const std::string& what, int line_, int column_)
      : Error(what + " at line " + std::to_string(line_) + ", column " + std::to_string(column_)),
        line(line_),
        column(column_) {}
};

// Shape problems: generator counts, vector lengths, degrees, indices.
struct DimensionError : Error {
  using Error::Error;
};

// Values outside a function's domain, non-unit division, transcendental
// functions requested on the exact backend.
struct DomainError : Error {
  using Error::Error;
};

// An internal identity failed to hold (e.g. lower-order boundary terms that
// should cancel did not).
struct VerificationError : Error {
  using Error::Error;
};

}  // namespace nilforms
