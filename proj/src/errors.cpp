#include "bornsim/errors.hpp"

namespace bornsim {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DegenerateDominant: return "DegenerateDominant";
        case ErrorCode::ZeroOperator: return "ZeroOperator";
        case ErrorCode::TieOutcome: return "TieOutcome";
        case ErrorCode::QuadratureFailure: return "QuadratureFailure";
        case ErrorCode::NotUnitary: return "NotUnitary";
        case ErrorCode::NotCommuting: return "NotCommuting";
        case ErrorCode::NotIdempotent: return "NotIdempotent";
        case ErrorCode::IncompleteSet: return "IncompleteSet";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace bornsim
