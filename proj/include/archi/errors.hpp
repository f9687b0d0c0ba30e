#pragma once

#include <stdexcept>
#include <string>

namespace archi {

/// Base class for domain errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid geometric input (non-simple polygon, overlapping islands, ...).
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Malformed scene, moment, basis or field file. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Degree beyond the supported cap, or a value that overflowed the working range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Numerical procedure failed to converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace archi
