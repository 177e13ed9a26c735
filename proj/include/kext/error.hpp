#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kext {

enum class ErrorCode {
    NonPrimeModulus,
    GroebnerBudgetExceeded,
    EmptyVariableList,
    UnknownVariable,
    SyntaxError,
    DimensionMismatch,
    MixedRings,
    CapabilityMissing,
    NotAComplex,
    NotAHomomorphism,
    NotLocal,
    BudgetExceeded,
    ShapeMismatch,
    NotMinimal,
    RankMismatch,
    UnverifiedF,
    NonCanonicalF,
    IncompleteAssignment,
    VerificationFailed,
    WindowViolated,
    NotRegular,
    InvalidArgument,
    FormatError,
};

inline const char* error_code_name(ErrorCode c)
{
    switch (c) {
    case ErrorCode::NonPrimeModulus: return "NonPrimeModulus";
    case ErrorCode::GroebnerBudgetExceeded: return "GroebnerBudgetExceeded";
    case ErrorCode::EmptyVariableList: return "EmptyVariableList";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MixedRings: return "MixedRings";
    case ErrorCode::CapabilityMissing: return "CapabilityMissing";
    case ErrorCode::NotAComplex: return "NotAComplex";
    case ErrorCode::NotAHomomorphism: return "NotAHomomorphism";
    case ErrorCode::NotLocal: return "NotLocal";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NotMinimal: return "NotMinimal";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::UnverifiedF: return "UnverifiedF";
    case ErrorCode::NonCanonicalF: return "NonCanonicalF";
    case ErrorCode::IncompleteAssignment: return "IncompleteAssignment";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::WindowViolated: return "WindowViolated";
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::FormatError: return "FormatError";
    }
    return "Unknown";
}

/// Every failure raised by the library. `subsystem` names the module that
/// detected the problem (ring, linalg, complex, ...), so the CLI can render
/// "subsystem: Code: message" without parsing text.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string subsystem, const std::string& message)
        : std::runtime_error(message), code_(code), subsystem_(std::move(subsystem))
    {
    }

    ErrorCode code() const noexcept { return code_; }
    const std::string& subsystem() const noexcept { return subsystem_; }

private:
    ErrorCode code_;
    std::string subsystem_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& message)
        : Error(ErrorCode::SyntaxError, "parse",
                message + " at position " + std::to_string(position)),
          position_(position)
    {
    }

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// NotAComplex carries the first degree n with d(n) * d(n+1) != 0.
class NotAComplexError : public Error {
public:
    NotAComplexError(int degree, const std::string& message)
        : Error(ErrorCode::NotAComplex, "complex", message), degree_(degree)
    {
    }

    int degree() const noexcept { return degree_; }

private:
    int degree_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& subsystem, const std::string& message)
{
    throw Error(code, subsystem, message);
}

} // namespace kext
