#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kinemotion {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input line; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Container header or layout that cannot be read.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Empty log, empty track, empty sample set.
class EmptyInputError : public Error {
public:
    using Error::Error;
};

class TooShortError : public Error {
public:
    using Error::Error;
};

/// Input is well formed but carries no usable information
/// (constant extent, single class, all-missing joint, zero variance).
class DegenerateError : public Error {
public:
    using Error::Error;
};

class StratificationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// A runtime guard (leakage, metric identity, ...) failed.
class InvariantError : public Error {
public:
    InvariantError(const std::string& invariant, const std::string& detail)
        : Error("invariant violated [" + invariant + "]: " + detail), invariant_(invariant) {}

    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

}  // namespace kinemotion
