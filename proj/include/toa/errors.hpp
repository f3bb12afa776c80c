#pragma once

#include <stdexcept>
#include <string>

namespace toa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class InvalidQuadrature : public Error {
public:
    using Error::Error;
};

class NonHermitianInput : public Error {
public:
    using Error::Error;
};

class NotNormalized : public Error {
public:
    using Error::Error;
};

class EmptyArc : public Error {
public:
    using Error::Error;
};

class ContractionViolation : public Error {
public:
    using Error::Error;
};

/// Raised when the measurement cadence does not exceed the Zeno time of the
/// input state and the caller did not request an override.
class ZenoGateError : public Error {
public:
    ZenoGateError(double eta, double zeno_time);

    double eta() const noexcept { return eta_; }
    double zeno_time() const noexcept { return zeno_time_; }

private:
    double eta_;
    double zeno_time_;
};

class UndefinedAverage : public Error {
public:
    using Error::Error;
};

/// Malformed or unreadable operator / spectrum / config file.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace toa
