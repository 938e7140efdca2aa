#pragma once

#include <stdexcept>
#include <string>

namespace frobkit {

// Base for failures caused by the numbers rather than by the caller:
// coalescing roots, poles, non-convergence.
class NumericalError : public std::runtime_error {
public:
    NumericalError(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// A configuration sits on (or too close to) a degenerate locus.
// The kind names the degeneracy, e.g. "coalescing-critical-points".
class DegenerateError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double best_residual)
        : NumericalError("non-convergence", what + " (best residual " + std::to_string(best_residual) + ")"),
          best_residual_(best_residual) {}

    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

// Request outside the implemented scope (e.g. unsupported series depth or N != 3).
class UnsupportedError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace frobkit
