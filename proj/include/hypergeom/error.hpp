#pragma once

#include <stdexcept>
#include <string>

namespace hgm {

enum class ErrorCode {
    InvalidArgument,
    ParseError,
    UnsupportedDegree,
    DenominatorNotInvertible,
    FormNotUnique,
    FormDegenerate,
    NoIntegralCandidate,
    NotATransvection,
    FactorizationIncomplete,
    OrbitBudgetExceeded,
    NotIntegral,
    TransversalBudgetExceeded,
    VerificationFailed,
    MemoryBudgetExceeded,
    LevelSearchExceeded,
    TimeBudgetExceeded,
    NotSymplectic,
    Internal,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::DenominatorNotInvertible: return "DenominatorNotInvertible";
    case ErrorCode::FormNotUnique: return "FormNotUnique";
    case ErrorCode::FormDegenerate: return "FormDegenerate";
    case ErrorCode::NoIntegralCandidate: return "NoIntegralCandidate";
    case ErrorCode::NotATransvection: return "NotATransvection";
    case ErrorCode::FactorizationIncomplete: return "FactorizationIncomplete";
    case ErrorCode::OrbitBudgetExceeded: return "OrbitBudgetExceeded";
    case ErrorCode::NotIntegral: return "NotIntegral";
    case ErrorCode::TransversalBudgetExceeded: return "TransversalBudgetExceeded";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::MemoryBudgetExceeded: return "MemoryBudgetExceeded";
    case ErrorCode::LevelSearchExceeded: return "LevelSearchExceeded";
    case ErrorCode::TimeBudgetExceeded: return "TimeBudgetExceeded";
    case ErrorCode::NotSymplectic: return "NotSymplectic";
    case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

/// True for the error kinds that signal an exhausted resource budget rather
/// than a mathematical property of the input.
inline bool is_budget_error(ErrorCode code) {
    return code == ErrorCode::OrbitBudgetExceeded ||
           code == ErrorCode::TransversalBudgetExceeded ||
           code == ErrorCode::MemoryBudgetExceeded ||
           code == ErrorCode::LevelSearchExceeded ||
           code == ErrorCode::TimeBudgetExceeded ||
           code == ErrorCode::FactorizationIncomplete;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace hgm
