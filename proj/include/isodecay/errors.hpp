#pragma once

#include <stdexcept>
#include <string>

namespace isodecay {

/// Base of every error raised by the library. The CLI maps the subclasses
/// onto exit codes, so new error kinds should derive from one of the
/// three families below rather than from this class directly.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input data or configuration (caller's fault).
class InputError : public Error {
public:
    using Error::Error;
};

/// The numerics broke down: scheme failure, NaN, non-convergence.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A verification check could not be satisfied.
class CheckError : public Error {
public:
    using Error::Error;
};

class ShapeError : public InputError {
public:
    using InputError::InputError;
};

class DomainError : public InputError {
public:
    using InputError::InputError;
};

class DegenerateDataError : public InputError {
public:
    using InputError::InputError;
};

class CompatibilityError : public InputError {
public:
    using InputError::InputError;
};

class InsufficientDataError : public InputError {
public:
    using InputError::InputError;
};

class ConfigError : public InputError {
public:
    using InputError::InputError;
};

/// Malformed data file (e.g. a diagnostics CSV given to `fit`).
class FormatError : public InputError {
public:
    using InputError::InputError;
};

class SchemeFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NaNDetected : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IterationLimitError : public NumericalError {
public:
    IterationLimitError(const std::string& what, double last_residual)
        : NumericalError(what), last_residual_(last_residual) {}
    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

class SelectionFailure : public CheckError {
public:
    using CheckError::CheckError;
};

/// Raised when an identity that must hold by construction does not.
class InternalError : public CheckError {
public:
    using CheckError::CheckError;
};

}  // namespace isodecay
