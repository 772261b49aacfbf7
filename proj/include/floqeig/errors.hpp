#pragma once

#include <stdexcept>
#include <string>

namespace floqeig {

/// Malformed scenario file or expression text.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A scenario violated a load-time invariant (periodicity, curve ordering,
/// label/sign mismatch); the message cites the offending sample point.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Classification hypotheses not met (adjacent same-label intervals, etc).
struct HypothesisViolation : std::runtime_error {
    explicit HypothesisViolation(std::string clause_)
        : std::runtime_error("hypothesis violation: " + clause_), clause(std::move(clause_)) {}
    std::string clause;
};

/// Power iteration did not reach the requested tolerance.
struct NoConvergence : std::runtime_error {
    NoConvergence(long iterations_, double last_residual_)
        : std::runtime_error("power iteration did not converge after " +
                             std::to_string(iterations_) +
                             " iterations (last residual " + std::to_string(last_residual_) + ")"),
          iterations(iterations_),
          last_residual(last_residual_) {}
    long iterations;
    double last_residual;
};

/// Moving interval narrower than the supported minimum width.
struct DegenerateWidth : std::runtime_error {
    explicit DegenerateWidth(const std::string& what) : std::runtime_error(what) {}
};

/// Zero pivot in a tridiagonal solve.
struct SingularSystem : std::runtime_error {
    explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

/// Drift sign pattern that is neither a plateau nor isolated zeros.
struct AmbiguousSign : std::runtime_error {
    explicit AmbiguousSign(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace floqeig
