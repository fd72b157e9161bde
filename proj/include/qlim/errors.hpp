#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qlim {

// Base of every library error. exit_code() is the CLI status for the error class.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 4; }
};

// Input or argument rejected before any work starts.
class ValidationError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

class ZeroGraph : public ValidationError {
public:
    ZeroGraph() : ValidationError("graph has zero total weight") {}
};

class DimensionMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NotDivisible : public ValidationError {
public:
    NotDivisible(std::size_t k, std::size_t n)
        : ValidationError(std::to_string(k) + " does not divide " + std::to_string(n)) {}
};

class NotSimple : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidEpsilon : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NotSymmetricGrapheur : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class UnsupportedContinuousComponent : public ValidationError {
public:
    UnsupportedContinuousComponent()
        : ValidationError("grapheur has continuous components; enable grid mode") {}
};

class InvalidArgument : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
public:
    ParseError(std::size_t line, const std::string& what)
        : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyInput : public ValidationError {
public:
    EmptyInput() : ValidationError("input contains no edges") {}
};

class IoError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Enumeration or solver size beyond the configured cap.
class BudgetExceeded : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace qlim
