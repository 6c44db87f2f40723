#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ipseries {

/// Failure categories shared by every module. The pipeline records the code
/// of a failed stage so downstream skips can name their cause.
enum class ErrorCode {
    Format,            ///< malformed header or file layout
    Parse,             ///< a cell could not be converted
    Sequence,          ///< dates not strictly monthly-consecutive
    Bounds,            ///< index or segment outside the series span
    Length,            ///< series too short for the operation
    Degenerate,        ///< zero dispersion, constant input
    Parameter,         ///< argument outside its admissible range
    Ambiguity,         ///< adjacent outlier flags
    UnsupportedPosition,
    Dimension,         ///< paired inputs of different lengths
    Rank,              ///< singular moment matrix
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ipseries
