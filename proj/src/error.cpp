#include "stabgreedy/error.hpp"

namespace stabgreedy {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::UnsupportedDerivative: return "UnsupportedDerivative";
        case ErrorCode::EmptySet: return "EmptySet";
        case ErrorCode::TooFewPoints: return "TooFewPoints";
        case ErrorCode::DuplicatePoints: return "DuplicatePoints";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::RejectionBudgetExceeded: return "RejectionBudgetExceeded";
        case ErrorCode::NumericallySingular: return "NumericallySingular";
        case ErrorCode::AllPowerZero: return "AllPowerZero";
        case ErrorCode::EmptyRestrictedSet: return "EmptyRestrictedSet";
        case ErrorCode::NonPositiveValue: return "NonPositiveValue";
        case ErrorCode::WindowOutOfRange: return "WindowOutOfRange";
        case ErrorCode::ModelValidation: return "ModelValidation";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace stabgreedy
