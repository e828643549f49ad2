#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liectrl {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidMatrix : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct SingularAutomorphism : Error { using Error::Error; };
struct NotInAlgebra : Error { using Error::Error; };
struct DegenerateChart : Error { using Error::Error; };
struct NotInvertible : Error { using Error::Error; };
struct ControlOutOfRange : Error { using Error::Error; };
struct BoundaryMargin : Error { using Error::Error; };
struct InsufficientSamples : Error { using Error::Error; };

// Raised by the expression parser; carries the byte offset of the offending
// token in the source string.
struct ParseError : Error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : Error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

struct EvalError : Error { using Error::Error; };

}  // namespace liectrl
