#pragma once

#include <stdexcept>
#include <string>

namespace isingem {

/// Coarse failure category. The CLI maps these onto exit codes.
enum class ErrorKind {
    InvalidBlock,
    InvalidLength,
    InvalidParameter,
    NumericDomain,
    Convergence,
    InversionFailure,
    PartitionAmbiguity,
    InternalConsistency,
    PhaseBoundary,
    LimitParameter,
    EnumerationTooLarge,
    QuadraticSolveFailure,
    ReducibleChain,
    Undersampled,
    Config,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Carries the worst residual seen when an iterative or certified step fails.
class ResidualError : public Error {
public:
    ResidualError(ErrorKind kind, const std::string& what, double residual)
        : Error(kind, what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

} // namespace isingem
