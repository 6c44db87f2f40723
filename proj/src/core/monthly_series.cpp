#include "ipseries/core/monthly_series.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ipseries/error.hpp"

namespace ipseries {

MonthlySeries::MonthlySeries(MonthDate start, std::vector<double> values)
    : start_(start), values_(std::move(values)) {
    if (values_.empty()) throw Error(ErrorCode::Length, "series must hold at least one value");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw Error(ErrorCode::Parameter, fmt::format("non-finite value at index {}", i));
    }
}

MonthDate MonthlySeries::date_at(std::size_t index) const {
    return start_.plus_months(static_cast<long>(index));
}

bool MonthlySeries::contains(const MonthDate& date) const noexcept {
    long d = distance(start_, date);
    return d >= 0 && static_cast<std::size_t>(d) < values_.size();
}

std::size_t MonthlySeries::index_of(const MonthDate& date) const {
    if (!contains(date))
        throw Error(ErrorCode::Bounds, fmt::format("{} outside series span {}..{}", date.iso(),
                                                   start_.iso(), end().iso()));
    return static_cast<std::size_t>(distance(start_, date));
}

MonthlySeries MonthlySeries::with_values(std::vector<double> values) const {
    if (values.size() != values_.size())
        throw Error(ErrorCode::Dimension, fmt::format("expected {} values, got {}", values_.size(),
                                                      values.size()));
    return {start_, std::move(values)};
}

}  // namespace ipseries
