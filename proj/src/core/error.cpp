#include "ipseries/error.hpp"

namespace ipseries {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Format: return "format";
        case ErrorCode::Parse: return "parse";
        case ErrorCode::Sequence: return "sequence";
        case ErrorCode::Bounds: return "bounds";
        case ErrorCode::Length: return "length";
        case ErrorCode::Degenerate: return "degenerate";
        case ErrorCode::Parameter: return "parameter";
        case ErrorCode::Ambiguity: return "ambiguity";
        case ErrorCode::UnsupportedPosition: return "unsupported-position";
        case ErrorCode::Dimension: return "dimension";
        case ErrorCode::Rank: return "rank";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

}  // namespace ipseries
