#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace graphalloc {

enum class ErrorCode {
    // configuration
    EmptyDependencySet,
    IndexOutOfRange,
    FewerThanTwoObjectives,
    InvalidConfig,
    UnknownProblem,
    InvalidSpec,
    ParseError,
    // objective expressions
    UnknownPrimitive,
    ArityError,
    NonFiniteConstant,
    // episode
    DimensionMismatch,
    EpisodeOver,
    ZeroBudget,
    // preferences / scalarization
    InvalidPreference,
    NonPositiveAlpha,
    NegativeObjective,
    NonPositiveMu,
    // metrics
    EmptyInput,
    PointBelowReference,
    ZeroIdealHV,
    LengthMismatch,
    DegenerateAfterRanking,
    TooManyObjectives,
    // oracle / harness
    TooLarge,
    PolicyFailure,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::EmptyDependencySet: return "EmptyDependencySet";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::FewerThanTwoObjectives: return "FewerThanTwoObjectives";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnknownProblem: return "UnknownProblem";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownPrimitive: return "UnknownPrimitive";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::NonFiniteConstant: return "NonFiniteConstant";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EpisodeOver: return "EpisodeOver";
    case ErrorCode::ZeroBudget: return "ZeroBudget";
    case ErrorCode::InvalidPreference: return "InvalidPreference";
    case ErrorCode::NonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorCode::NegativeObjective: return "NegativeObjective";
    case ErrorCode::NonPositiveMu: return "NonPositiveMu";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::PointBelowReference: return "PointBelowReference";
    case ErrorCode::ZeroIdealHV: return "ZeroIdealHV";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateAfterRanking: return "DegenerateAfterRanking";
    case ErrorCode::TooManyObjectives: return "TooManyObjectives";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::PolicyFailure: return "PolicyFailure";
    }
    return "Unknown";
}

// Every library failure is reported through this type; `code()` identifies the rule.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what)
        , code_(code)
    {
    }

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Configuration-class errors map to CLI exit code 2.
constexpr bool is_config_error(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::EmptyDependencySet:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::FewerThanTwoObjectives:
    case ErrorCode::InvalidConfig:
    case ErrorCode::UnknownProblem:
    case ErrorCode::InvalidSpec:
    case ErrorCode::ParseError:
    case ErrorCode::UnknownPrimitive:
    case ErrorCode::ArityError:
    case ErrorCode::NonFiniteConstant:
    case ErrorCode::NonPositiveAlpha:
    case ErrorCode::NonPositiveMu:
    case ErrorCode::InvalidPreference:
        return true;
    default:
        return false;
    }
}

} // namespace graphalloc
