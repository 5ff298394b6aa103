#pragma once

#include <stdexcept>
#include <string>

namespace polaron {

// Base for all library errors. The CLI maps the three subfamilies to
// distinct exit codes, so new error types should pick the right parent.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input: schema violations, out-of-range parameters, malformed grids.
struct InputError : Error {
    using Error::Error;
};

// A numerical precondition failed (non-finite state, non-decaying trace, ...).
struct NumericError : Error {
    using Error::Error;
};

// An iteration failed to converge (steady-state search, cutoff search, ...).
struct ConvergenceError : Error {
    using Error::Error;
};

struct EmptyGrid : InputError {
    EmptyGrid() : InputError("frequency grid has no points") {}
};

struct RangeError : InputError {
    explicit RangeError(const std::string& what) : InputError(what) {}
};

struct SchemaError : InputError {
    explicit SchemaError(const std::string& what) : InputError(what) {}
};

struct NegativeFrequency : InputError {
    explicit NegativeFrequency(const std::string& what) : InputError(what) {}
};

struct ZeroLinewidth : InputError {
    explicit ZeroLinewidth(const std::string& what) : InputError(what) {}
};

struct InsufficientModes : InputError {
    explicit InsufficientModes(const std::string& what) : InputError(what) {}
};

struct NonDecayingTrace : NumericError {
    explicit NonDecayingTrace(const std::string& what) : NumericError(what) {}
};

struct NonFiniteState : NumericError {
    explicit NonFiniteState(const std::string& what) : NumericError(what) {}
};

struct SingularDenominator : NumericError {
    explicit SingularDenominator(const std::string& what) : NumericError(what) {}
};

struct SlowDecay : ConvergenceError {
    explicit SlowDecay(const std::string& what) : ConvergenceError(what) {}
};

struct NoSteadyState : ConvergenceError {
    explicit NoSteadyState(const std::string& what) : ConvergenceError(what) {}
};

}  // namespace polaron
