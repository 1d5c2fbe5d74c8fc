#pragma once

#include <stdexcept>
#include <string>

namespace perceptsim {

// Base for every error raised by the library. The CLI maps each subclass
// onto a stable exit code (see cli.hpp).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside an operation's mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed input text (not valid JSON / CSV).
class ParseError : public Error {
public:
    using Error::Error;
};

// Well-formed input that violates the document schema. `path()` is a
// JSON-pointer style location of the offending key, e.g. "/items/3/mean".
class SchemaError : public Error {
public:
    SchemaError(std::string path, const std::string& message)
        : Error(path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// Rank-deficient design or other singular linear system.
class SingularityError : public Error {
public:
    using Error::Error;
};

// Iterative numeric routine failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace perceptsim
