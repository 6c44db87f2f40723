#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ipseries/core/month_date.hpp"

namespace ipseries {

/// Evenly spaced monthly observations anchored at a calendar month.
/// Value k belongs to start + k months. Immutable after construction.
class MonthlySeries {
public:
    /// Throws Error(Length) when empty, Error(Parameter) on non-finite values.
    MonthlySeries(MonthDate start, std::vector<double> values);

    [[nodiscard]] const MonthDate& start() const noexcept { return start_; }
    [[nodiscard]] MonthDate end() const { return date_at(size() - 1); }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

    [[nodiscard]] MonthDate date_at(std::size_t index) const;
    /// Index of `date` in this series; Error(Bounds) when outside the span.
    [[nodiscard]] std::size_t index_of(const MonthDate& date) const;
    [[nodiscard]] bool contains(const MonthDate& date) const noexcept;

    /// Same anchor, new values (length must match).
    [[nodiscard]] MonthlySeries with_values(std::vector<double> values) const;

    friend bool operator==(const MonthlySeries&, const MonthlySeries&) = default;

private:
    MonthDate start_;
    std::vector<double> values_;
};

}  // namespace ipseries
