#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace moa {

// Base class for every error raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operand rank is outside the operation's domain.
struct RankError : Error {
    using Error::Error;
};

// An index component falls outside the extent of its axis.
struct IndexError : Error {
    using Error::Error;
};

// Operand shapes (or vector lengths) do not conform.
struct ConformanceError : Error {
    using Error::Error;
};

// Pointwise division by exact zero.
struct DivisionError : Error {
    using Error::Error;
};

// A shape-level contract is violated (negative extent, mismatched
// declaration, non-square matrix, ...).
struct ShapeError : Error {
    using Error::Error;
};

// Expression text does not conform to the grammar.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at offset " + std::to_string(position) + ")"),
          position(position) {}

    std::size_t position;
};

// Identifier used in an expression without an out-of-band declaration.
struct UnknownIdentifierError : ParseError {
    using ParseError::ParseError;
};

// An expression node (or offset form) the rewrite engine cannot lower.
struct ReductionError : Error {
    using Error::Error;
};

// Input matrix is not symmetric within tolerance.
struct SymmetryError : Error {
    using Error::Error;
};

// The p.Ap denominator certifies that A is not positive-definite.
struct NotPositiveDefiniteError : Error {
    using Error::Error;
};

// File ingestion / emission failure.
struct IoError : Error {
    using Error::Error;
};

}  // namespace moa
