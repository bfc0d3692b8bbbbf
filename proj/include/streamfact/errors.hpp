#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace streamfact {

// Base class for everything this library throws deliberately.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A documented precondition was broken by the caller (dimension mismatch,
// value out of range, non-finite input, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

// An SPD factorisation hit a nonpositive (or numerically zero) pivot.
// Carries the index of the pivot that failed.
class SingularSystem : public Error {
public:
    SingularSystem(const std::string& what, std::size_t pivot_index)
        : Error(what), pivot_index_(pivot_index) {}

    std::size_t pivot_index() const noexcept { return pivot_index_; }

private:
    std::size_t pivot_index_ = 0;
};

// A requested result would exceed a configured size cap.
class CapacityExceeded : public Error {
public:
    using Error::Error;
};

// Malformed input file. line/column are 1-based; 0 means "not applicable".
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(what), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_ = 0;
    std::size_t column_ = 0;
};

// A full covariance that should have the form V (x) I no longer does.
class StructureBroken : public Error {
public:
    using Error::Error;
};

// A numerical invariant was violated beyond repair thresholds; usually
// indicates a bug upstream rather than bad user input.
class NumericsError : public Error {
public:
    using Error::Error;
};

}  // namespace streamfact
