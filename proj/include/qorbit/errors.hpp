#pragma once

#include <stdexcept>
#include <string>

namespace qorbit {

// Base class of everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Misuse of an interface contract (bad arguments, mismatched kinds, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

// Interpolation / lookup outside the covered time range.
class RangeError : public UsageError {
public:
    using UsageError::UsageError;
};

// Series too short for the requested operation.
class LengthError : public UsageError {
public:
    using UsageError::UsageError;
};

// Delay not commensurate with the sampling grid.
class AlignmentError : public UsageError {
public:
    using UsageError::UsageError;
};

// Constant or otherwise information-free input.
class DegenerateInputError : public UsageError {
public:
    using UsageError::UsageError;
};

class EmptyInputError : public UsageError {
public:
    using UsageError::UsageError;
};

// Configuration file / schema problems. `field_path` names the offending key.
class ConfigError : public Error {
public:
    ConfigError(const std::string& field_path, const std::string& what)
        : Error(field_path.empty() ? what : field_path + ": " + what), field_path_(field_path) {}
    const std::string& field_path() const { return field_path_; }

private:
    std::string field_path_;
};

// Failures of the numerics at run time (CLI exit code 1).
class NumericalError : public Error {
public:
    using Error::Error;
};

// Adaptive step size shrank below the representable limit; `time()` is where.
class StepSizeUnderflowError : public NumericalError {
public:
    StepSizeUnderflowError(const std::string& what, double time)
        : NumericalError(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_ = 0.0;
};

// A state component became non-finite; `time()` is the first occurrence.
class DivergenceError : public NumericalError {
public:
    DivergenceError(const std::string& what, double time)
        : NumericalError(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_ = 0.0;
};

// A state left its physically admissible set beyond tolerance.
class PhysicalityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Parameter combination outside the formula's domain.
class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Not enough samples / neighbors to form an estimate.
class InsufficientDataError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace qorbit
