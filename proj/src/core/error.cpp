#include "core/error.hpp"

namespace illumest {

const char* to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::Decode: return "DecodeError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::Degenerate: return "DegenerateImage";
    case ErrorCode::DegenerateReference: return "DegenerateReference";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NonUniformWeights: return "NonUniformWeights";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

} // namespace illumest
