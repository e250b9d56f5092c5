#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bcsgap {

enum class ErrorCode {
    NonPositiveParameter,
    CutoffTooLarge,
    DosMismatch,
    ToleranceNotMet,
    NonFiniteIntegrand,
    NonFiniteInput,
    OutsideDomain,
    ZeroGapAtZeroT,
    NoBracket,
    BracketFailure,
    NotSolved,
    CutoffNotZero,
    InvalidArgument,
    ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::CutoffTooLarge: return "CutoffTooLarge";
    case ErrorCode::DosMismatch: return "DosMismatch";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::ZeroGapAtZeroT: return "ZeroGapAtZeroT";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::NotSolved: return "NotSolved";
    case ErrorCode::CutoffNotZero: return "CutoffNotZero";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace bcsgap
