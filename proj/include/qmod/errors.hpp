#pragma once

#include <stdexcept>
#include <string>

namespace qmod {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (p <= 1, z outside the disk, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A geometric or configuration object violates its invariants.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A weight field produced a non-positive or NaN value.
class InvalidFieldError : public Error {
public:
    using Error::Error;
};

/// Quadrature or iterative solver failed to reach its tolerance.
/// Carries the last estimate so callers can still inspect it.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double estimate, double error_bound)
        : Error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

/// The modulus integral is 0 or +inf, so a normalized density cannot be formed.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Reading or writing an output file failed.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace qmod
