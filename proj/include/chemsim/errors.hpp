#pragma once

#include <stdexcept>
#include <string>

namespace chemsim {

/// Malformed scenario file, bad CLI flag, invalid parameter combination.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iterative elliptic solve did not reach the requested residual.
/// Carries the iteration count and the last residual so callers never
/// mistake a partial answer for a converged one.
class EllipticError : public std::runtime_error {
public:
    EllipticError(const std::string& msg, int iterations_, double residual_)
        : std::runtime_error(msg), iterations(iterations_), residual(residual_) {}
    int iterations;
    double residual;
};

/// Requested time step exceeds the admissible CFL step.
class CflError : public std::runtime_error {
public:
    CflError(const std::string& msg, double admissible_dt_)
        : std::runtime_error(msg), admissible_dt(admissible_dt_) {}
    double admissible_dt;
};

/// A quantity the scheme guarantees by construction came out wrong
/// (negative density beyond round-off, mass drift, lost monotonicity).
class InternalError : public std::runtime_error {
public:
    explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A monitored theoretical bound was violated at run time (e.g. the
/// signal dropped below the singular-sensitivity floor).
class BoundViolation : public std::runtime_error {
public:
    explicit BoundViolation(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace chemsim
