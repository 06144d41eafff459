#pragma once

#include <stdexcept>
#include <string>

namespace muforge {

// Error categories shared by the library and the CLI. The numeric code is
// the CLI exit code: 2 parse, 3 bound, 4 precondition, 5 contract/property
// failure.
class Error : public std::runtime_error {
public:
    Error(std::string msg, int exit_code)
        : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}

    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

// Malformed input (DIMACS, recipe files, ...).
class ParseError : public Error {
public:
    explicit ParseError(std::string msg) : Error(std::move(msg), 2) {}
};

// A configured resource bound was exceeded (variable bound, enumeration
// limit). Never downgraded to an approximation.
class BoundError : public Error {
public:
    explicit BoundError(std::string msg) : Error(std::move(msg), 3) {}
};

// An operation was called outside its contract.
class PreconditionError : public Error {
public:
    explicit PreconditionError(std::string msg) : Error(std::move(msg), 4) {}
};

// A guaranteed property failed to hold; indicates a corpus bug or an
// implementation bug, never a user error.
class PropertyError : public Error {
public:
    explicit PropertyError(std::string msg) : Error(std::move(msg), 5) {}
};

}  // namespace muforge
