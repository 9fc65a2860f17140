#include "dampkit/errors.hpp"

namespace dampkit {

const char* error_code_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorCode::SingularMap: return "SingularMap";
    case ErrorCode::ContourFailure: return "ContourFailure";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::UnknownModel: return "UnknownModel";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

} // namespace dampkit
