#pragma once

#include <stdexcept>
#include <string>

namespace besov {

/// Error categories surfaced by the library. The CLI maps these onto
/// process exit codes, so every throw site picks the most specific one.
enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    OutOfBand,
    HypothesisViolation,
    SingularMode,
    NonContractive,
    NonDiagonalizable,
    BranchCut,
    ConditionViolation,
    PositivityViolation,
    Degenerate,
    Unsupported,
    BadMagic,
    VersionMismatch,
    Truncated,
    Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    /// True for the file-format and filesystem family.
    bool is_io() const noexcept {
        return code_ == ErrorCode::BadMagic || code_ == ErrorCode::VersionMismatch ||
               code_ == ErrorCode::Truncated || code_ == ErrorCode::Io;
    }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
    if (!condition) throw Error(code, what);
}

}  // namespace besov
