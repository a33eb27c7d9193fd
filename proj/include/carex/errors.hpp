#pragma once

#include <stdexcept>
#include <string>

namespace carex {

/// Error categories thrown by the library. Each maps to a distinct failure
/// mode so callers can react programmatically instead of parsing messages.
enum class ErrorCode {
    NonSquare,
    NonFinite,
    DimensionMismatch,
    SingularMatrix,
    TooLarge,
    NoConvergence,
    SingularShift,
    SingularLift,
    SingularInitialization,
    InvalidUserGuess,
    NonHermitianData,
    InvalidConfig,
    ParseError,
    ShapeError,
    HermitianViolation,
    BadId,
    UnstableInput,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonSquare: return "NonSquare";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::SingularShift: return "SingularShift";
        case ErrorCode::SingularLift: return "SingularLift";
        case ErrorCode::SingularInitialization: return "SingularInitialization";
        case ErrorCode::InvalidUserGuess: return "InvalidUserGuess";
        case ErrorCode::NonHermitianData: return "NonHermitianData";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ShapeError: return "ShapeError";
        case ErrorCode::HermitianViolation: return "HermitianViolation";
        case ErrorCode::BadId: return "BadId";
        case ErrorCode::UnstableInput: return "UnstableInput";
    }
    return "Unknown";
}

} // namespace carex
