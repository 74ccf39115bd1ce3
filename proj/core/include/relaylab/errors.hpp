#pragma once

#include <stdexcept>
#include <string>

namespace relaylab {

/// Malformed or inconsistent experiment description (bad key, bad value,
/// violated invariant). Message names the offending field when known.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numeric evaluation produced a value outside its mathematically valid
/// range by more than the tolerated roundoff, or inputs left the domain of
/// a closed-form expression.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Adaptive quadrature exhausted its subdivision budget before reaching the
/// requested tolerance. Carries the best estimate and its error bound.
class AccuracyError : public NumericError {
public:
    AccuracyError(const std::string& msg, double best, double error_bound)
        : NumericError(msg), best_estimate(best), error_bound(error_bound) {}
    double best_estimate;
    double error_bound;
};

/// Problem size exceeds a hard implementation limit (e.g. subset
/// enumeration over too many relays).
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace relaylab
