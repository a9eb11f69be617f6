#pragma once

#include <stdexcept>
#include <string>

namespace divctl {

// Root of every error the library raises. Callers that only care about
// "did it work" can catch this; the CLI maps the concrete types to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A primitive input is outside its admissible range.
class RangeError : public Error {
public:
    RangeError(std::string field, const std::string& detail)
        : Error("invalid value for '" + field + "': " + detail), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Gross premium block disagrees with the adjusted drifts.
class InconsistentGross : public Error {
public:
    using Error::Error;
};

// Main-regime pivot w1 or w2 is undefined (zero denominator).
class DegenerateRegime : public Error {
public:
    using Error::Error;
};

// A function was evaluated outside the domain where it is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

// Root bracket does not straddle zero. Signals a misclassified scenario.
class BracketError : public Error {
public:
    using Error::Error;
};

// Parameters are valid but outside what the closed form can represent.
class Unsupported : public Error {
public:
    using Error::Error;
};

// Switching points came out in the wrong order after a solve.
class InternalOrderingError : public Error {
public:
    using Error::Error;
};

// Caller broke an operation's precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Simulation settings violate their invariants.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Run-configuration document is malformed or has unknown keys.
class SchemaError : public Error {
public:
    using Error::Error;
};

// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace divctl
