#pragma once

#include <stdexcept>
#include <string>

namespace sumspace {

// Bad user input: malformed files, invalid parameters. CLI exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A computed object failed one of its invariants. CLI exit code 2.
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative numerics did not converge to the requested tolerance.
class ConvergenceError : public VerificationError {
public:
    ConvergenceError(const std::string& what, double residual)
        : VerificationError(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

}  // namespace sumspace
