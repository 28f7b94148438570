#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slp {

/// Base of every exception thrown by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, malformed configuration, or unusable input files.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input data that is well-formed but cannot be used (coverage, degenerate series, ...).
class DataError : public Error {
public:
    using Error::Error;
};

class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class CoverageError : public DataError {
public:
    CoverageError(double coverage, const std::string& what) : DataError(what), coverage_(coverage) {}

    double coverage() const noexcept { return coverage_; }

private:
    double coverage_;
};

/// Rank deficiency, non-positive curves and other failures of the numerical core.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace slp
