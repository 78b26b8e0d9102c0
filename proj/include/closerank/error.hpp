#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace closerank {

/// Base for every error raised by the library. Callers that only need to
/// distinguish "bad data" from "bad usage" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    /// 1-based line number, 0 when the error is not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Argument outside the mathematical domain of an operation
/// (non-positive closeness, n < 2, k > n, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class NotConnectedError : public Error {
public:
    NotConnectedError() : Error("graph not connected") {}
};

/// Closeness profile carries no information about the slope, e.g. every
/// node of a vertex-transitive graph has the same closeness.
class DegenerateProfileError : public Error {
public:
    DegenerateProfileError() : Error("degenerate profile: all closeness values are equal") {}
};

class FitError : public Error {
public:
    using Error::Error;
};

}  // namespace closerank
