#pragma once

#include <stdexcept>
#include <string>

namespace gazent {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input text: bad header, wrong column count, unparsable field.
class ParseError : public Error {
public:
    ParseError(long line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    long line() const noexcept { return line_; }

private:
    long line_;
};

/// Structurally readable input that violates a domain invariant
/// (non-positive duration, duplicate record, unknown page, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A computation could not produce a meaningful result
/// (all kernel mass off-grid, degenerate statistics, contract breach).
class ComputeError : public Error {
public:
    using Error::Error;
};

} // namespace gazent
