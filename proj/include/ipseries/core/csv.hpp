#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ipseries/core/month_date.hpp"
#include "ipseries/core/monthly_series.hpp"

namespace ipseries {

inline constexpr std::string_view kCsvHeader =
    "Date,Number.of.Trademark.Applications,Number.of.Patent.Applications";

struct RawRow {
    std::string date_text;  ///< verbatim, e.g. "9/1/1977"
    MonthDate date;
    std::int64_t trademarks = 0;
    std::int64_t patents = 0;

    friend bool operator==(const RawRow&, const RawRow&) = default;
};

struct RawTable {
    std::vector<RawRow> rows;

    [[nodiscard]] std::size_t size() const noexcept { return rows.size(); }
    friend bool operator==(const RawTable&, const RawTable&) = default;
};

enum class Column { Trademarks, Patents };

/// Parses the monthly filing-count CSV. Accepts LF or CRLF line endings.
///
/// Errors: Format (header mismatch, naming the offending column), Parse
/// (bad date or non-integer / negative count, with 1-based data row number),
/// Sequence (a row that is not exactly one month after its predecessor).
RawTable parse_csv(std::string_view bytes);

/// Inverse of parse_csv for well-formed input (LF endings).
std::string serialize_csv(const RawTable& table);

RawTable read_csv_file(const std::filesystem::path& path);

/// First `keep` values of `column`, anchored at the first row's date.
MonthlySeries to_monthly_series(const RawTable& raw, Column column, std::size_t keep);

}  // namespace ipseries
