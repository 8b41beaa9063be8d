#include "besov/error.hpp"

namespace besov {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid argument";
        case ErrorCode::DimensionMismatch: return "dimension mismatch";
        case ErrorCode::OutOfBand: return "out of band";
        case ErrorCode::HypothesisViolation: return "hypothesis violation";
        case ErrorCode::SingularMode: return "singular mode";
        case ErrorCode::NonContractive: return "non-contractive";
        case ErrorCode::NonDiagonalizable: return "non-diagonalizable";
        case ErrorCode::BranchCut: return "branch cut";
        case ErrorCode::ConditionViolation: return "condition violation";
        case ErrorCode::PositivityViolation: return "positivity violation";
        case ErrorCode::Degenerate: return "degenerate input";
        case ErrorCode::Unsupported: return "unsupported";
        case ErrorCode::BadMagic: return "bad magic";
        case ErrorCode::VersionMismatch: return "version mismatch";
        case ErrorCode::Truncated: return "truncated payload";
        case ErrorCode::Io: return "i/o error";
    }
    return "unknown error";
}

}  // namespace besov
