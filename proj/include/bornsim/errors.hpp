#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bornsim {

enum class ErrorCode {
    InvalidArgument,
    DegenerateDominant,
    ZeroOperator,
    TieOutcome,
    QuadratureFailure,
    NotUnitary,
    NotCommuting,
    NotIdempotent,
    IncompleteSet,
    ParseError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for every failure the library reports; callers
/// branch on code() rather than on a class hierarchy.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace bornsim
