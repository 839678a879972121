#include "isingem/errors.hpp"

namespace isingem {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidBlock: return "invalid-block";
    case ErrorKind::InvalidLength: return "invalid-length";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::NumericDomain: return "numeric-domain";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::InversionFailure: return "inversion-failure";
    case ErrorKind::PartitionAmbiguity: return "partition-ambiguity";
    case ErrorKind::InternalConsistency: return "internal-consistency";
    case ErrorKind::PhaseBoundary: return "phase-boundary";
    case ErrorKind::LimitParameter: return "limit-parameter";
    case ErrorKind::EnumerationTooLarge: return "enumeration-too-large";
    case ErrorKind::QuadraticSolveFailure: return "quadratic-solve-failure";
    case ErrorKind::ReducibleChain: return "reducible-chain";
    case ErrorKind::Undersampled: return "estimator-undersampled";
    case ErrorKind::Config: return "config";
    }
    return "unknown";
}

} // namespace isingem
