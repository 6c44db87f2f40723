#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace ipseries {

/// A Gregorian (year, month) pair. Ordering is lexicographic on (year, month).
class MonthDate {
public:
    MonthDate() = default;
    MonthDate(int year, int month);

    [[nodiscard]] int year() const noexcept { return year_; }
    [[nodiscard]] int month() const noexcept { return month_; }

    /// Shift by a signed number of months.
    [[nodiscard]] MonthDate plus_months(long months) const;

    /// "1982-09"
    [[nodiscard]] std::string iso() const;
    /// "Sep 1982"
    [[nodiscard]] std::string label() const;

    /// Parses "YYYY-MM".
    static MonthDate from_iso(std::string_view text);
    /// Parses "M/D/YYYY" where D must be 1.
    static MonthDate from_mdy(std::string_view text);

    friend auto operator<=>(const MonthDate&, const MonthDate&) = default;

private:
    int year_ = 1970;
    int month_ = 1;
};

/// Number of months from `a` to `b`: 12*(b.year-a.year) + (b.month-a.month).
[[nodiscard]] long distance(const MonthDate& a, const MonthDate& b) noexcept;

}  // namespace ipseries
