#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace dduffing {

class Trajectory;

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (invalid elliptic parameter, amplitude inside the separatrix, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The implicit amplitude equation has no root for the requested (T, n).
class NoSolutionError : public Error {
public:
    using Error::Error;
};

/// An iteration failed to converge or produced non-finite values.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A query outside the stored time range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Invalid solver or probe configuration, or a violated precondition.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The DDE state became non-finite. Carries the last finite time and the
/// trajectory computed up to that point.
class IntegrationDiverged : public NumericalError {
public:
    IntegrationDiverged(const std::string& what, double last_time,
                        std::shared_ptr<const Trajectory> partial)
        : NumericalError(what), last_time_(last_time), partial_(std::move(partial)) {}

    double last_time() const noexcept { return last_time_; }
    const std::shared_ptr<const Trajectory>& partial() const noexcept { return partial_; }

private:
    double last_time_;
    std::shared_ptr<const Trajectory> partial_;
};

}  // namespace dduffing
