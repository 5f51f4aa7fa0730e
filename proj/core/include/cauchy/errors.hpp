#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cauchy {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument or configuration (out-of-range angle, too few nodes, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A mesh violates one of the TriMesh invariants.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed mesh text file. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input/output failure (unwritable directory, unreadable file).
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace cauchy
