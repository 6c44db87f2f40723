#include "ipseries/core/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "ipseries/error.hpp"

namespace ipseries {

namespace {

constexpr std::array<std::string_view, 3> kColumns = {
    "Date", "Number.of.Trademark.Applications", "Number.of.Patent.Applications"};

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        auto next = line.find(sep, pos);
        out.push_back(line.substr(pos, next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

std::int64_t parse_count(std::string_view cell, std::size_t row, std::string_view column) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || value < 0)
        throw Error(ErrorCode::Parse, fmt::format("row {}: {} '{}' is not a non-negative integer",
                                                  row, column, cell));
    return value;
}

void check_header(std::string_view line) {
    auto cells = split(line, ',');
    for (std::size_t i = 0; i < kColumns.size(); ++i) {
        if (i >= cells.size())
            throw Error(ErrorCode::Format, fmt::format("header is missing column '{}'", kColumns[i]));
        if (cells[i] != kColumns[i])
            throw Error(ErrorCode::Format, fmt::format("header column {} is '{}', expected '{}'",
                                                       i + 1, cells[i], kColumns[i]));
    }
    if (cells.size() > kColumns.size())
        throw Error(ErrorCode::Format,
                    fmt::format("unexpected header column '{}'", cells[kColumns.size()]));
}

}  // namespace

RawTable parse_csv(std::string_view bytes) {
    if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);

    std::vector<std::string_view> lines;
    for (auto line : split(bytes, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw Error(ErrorCode::Format, "missing header row");
    check_header(lines.front());

    RawTable table;
    table.rows.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t row = i;  // 1-based data row
        auto cells = split(lines[i], ',');
        if (cells.size() != kColumns.size())
            throw Error(ErrorCode::Parse, fmt::format("row {}: expected {} fields, found {}", row,
                                                      kColumns.size(), cells.size()));
        RawRow r;
        r.date_text = std::string(cells[0]);
        try {
            r.date = MonthDate::from_mdy(cells[0]);
        } catch (const Error& e) {
            throw Error(ErrorCode::Parse, fmt::format("row {}: {}", row, e.what()));
        }
        r.trademarks = parse_count(cells[1], row, kColumns[1]);
        r.patents = parse_count(cells[2], row, kColumns[2]);
        if (!table.rows.empty()) {
            const auto& prev = table.rows.back().date;
            if (distance(prev, r.date) != 1)
                throw Error(ErrorCode::Sequence,
                            fmt::format("row {}: {} does not follow {} by one month", row,
                                        r.date.iso(), prev.iso()));
        }
        table.rows.push_back(std::move(r));
    }
    return table;
}

std::string serialize_csv(const RawTable& table) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : table.rows) out += fmt::format("{},{},{}\n", r.date_text, r.trademarks, r.patents);
    return out;
}

RawTable read_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

MonthlySeries to_monthly_series(const RawTable& raw, Column column, std::size_t keep) {
    if (keep > raw.size())
        throw Error(ErrorCode::Bounds,
                    fmt::format("cannot keep {} rows from a table of {}", keep, raw.size()));
    if (keep == 0) throw Error(ErrorCode::Length, "keep must be at least 1");
    std::vector<double> v;
    v.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        const auto& r = raw.rows[i];
        v.push_back(static_cast<double>(column == Column::Trademarks ? r.trademarks : r.patents));
    }
    return {raw.rows.front().date, std::move(v)};
}

}  // namespace ipseries
