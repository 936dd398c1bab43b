#pragma once

#include <stdexcept>
#include <string>

namespace sit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter set or configuration violates its invariants.
class InvalidParams : public Error {
public:
    using Error::Error;
};

/// A state vector holds a non-finite component.
class InvalidState : public Error {
public:
    using Error::Error;
};

/// The integrator produced a non-finite state.
class IntegrationBlowup : public Error {
public:
    IntegrationBlowup(double t, const std::string& what)
        : Error(what), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

class InvalidPulse : public Error {
public:
    using Error::Error;
};

/// Estimator samples are not uniformly spaced or not increasing.
class InvalidWindow : public Error {
public:
    using Error::Error;
};

/// A pulse was requested on a non-release day or out of order.
class SchedulingError : public Error {
public:
    using Error::Error;
};

/// Trajectory, reference and command series do not share a grid.
class AlignmentError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration file; the message names section, key and line.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace sit
