#pragma once

#include <stdexcept>
#include <string>

namespace execbench {

// Base for every error the library raises. The CLI maps ConfigError to exit
// code 1 and everything else to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input file does not match the expected column layout.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Input is well-formed but its content violates a data contract.
class DataError : public Error {
public:
    using Error::Error;
};

// Row-level parse failure; carries the 1-based data row number.
class RowError : public DataError {
public:
    RowError(std::size_t row, const std::string& what)
        : DataError("row " + std::to_string(row) + ": " + what), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

// Invalid or unsatisfiable parameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Activity (or other key) not present where it was looked up.
class LookupError : public Error {
public:
    using Error::Error;
};

// A score whose denominator is zero was requested.
class UndefinedScoreError : public Error {
public:
    using Error::Error;
};

}  // namespace execbench
