#include "ipseries/core/month_date.hpp"

#include <array>
#include <charconv>

#include <fmt/format.h>

#include "ipseries/error.hpp"

namespace ipseries {

namespace {

constexpr std::array<const char*, 12> kMonthNames = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                     "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

int parse_int(std::string_view text, std::string_view whole) {
    int value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last)
        throw Error(ErrorCode::Parse, fmt::format("invalid date '{}'", whole));
    return value;
}

}  // namespace

MonthDate::MonthDate(int year, int month) : year_(year), month_(month) {
    if (month < 1 || month > 12)
        throw Error(ErrorCode::Parameter, fmt::format("month {} outside 1..12", month));
}

MonthDate MonthDate::plus_months(long months) const {
    long total = static_cast<long>(year_) * 12 + (month_ - 1) + months;
    long y = total >= 0 ? total / 12 : -((-total + 11) / 12);
    long m = total - y * 12;
    return {static_cast<int>(y), static_cast<int>(m) + 1};
}

std::string MonthDate::iso() const { return fmt::format("{:04d}-{:02d}", year_, month_); }

std::string MonthDate::label() const { return fmt::format("{} {}", kMonthNames[month_ - 1], year_); }

MonthDate MonthDate::from_iso(std::string_view text) {
    auto dash = text.find('-');
    if (dash == std::string_view::npos)
        throw Error(ErrorCode::Parse, fmt::format("invalid date '{}'", text));
    int y = parse_int(text.substr(0, dash), text);
    int m = parse_int(text.substr(dash + 1), text);
    if (m < 1 || m > 12) throw Error(ErrorCode::Parse, fmt::format("invalid month in '{}'", text));
    return {y, m};
}

MonthDate MonthDate::from_mdy(std::string_view text) {
    auto s1 = text.find('/');
    auto s2 = s1 == std::string_view::npos ? s1 : text.find('/', s1 + 1);
    if (s2 == std::string_view::npos)
        throw Error(ErrorCode::Parse, fmt::format("invalid date '{}'", text));
    int m = parse_int(text.substr(0, s1), text);
    int d = parse_int(text.substr(s1 + 1, s2 - s1 - 1), text);
    int y = parse_int(text.substr(s2 + 1), text);
    if (m < 1 || m > 12) throw Error(ErrorCode::Parse, fmt::format("invalid month in '{}'", text));
    if (d != 1) throw Error(ErrorCode::Parse, fmt::format("day must be 1 in '{}'", text));
    return {y, m};
}

long distance(const MonthDate& a, const MonthDate& b) noexcept {
    return 12L * (b.year() - a.year()) + (b.month() - a.month());
}

}  // namespace ipseries
