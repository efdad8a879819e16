#pragma once

#include <stdexcept>
#include <string>

namespace aitsde {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// A value violates a mathematical precondition: nonpositive state,
// parameter constraint out of range, malformed fit input.
class DomainError : public Error {
public:
    using Error::Error;
};

// Step size outside the solvability window of an implicit scheme.
class StepSizeError : public Error {
public:
    using Error::Error;
};

// An iterative solver exhausted its budget. Valid inputs never trigger
// this; it signals a bug rather than a user mistake.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Config file or flag problem, reported with its source context.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace aitsde
