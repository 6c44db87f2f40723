#pragma once

#include "ipseries/core/month_date.hpp"
#include "ipseries/core/monthly_series.hpp"

namespace ipseries {

/// Inclusive calendar window. Label 0 denotes the full span.
struct Segment {
    int label = 0;
    MonthDate start;
    MonthDate end;

    [[nodiscard]] long length() const noexcept { return distance(start, end) + 1; }
    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Copies the values inside `seg`; the result is anchored at seg.start.
MonthlySeries slice_segment(const MonthlySeries& series, const Segment& seg);

/// Segment covering the whole series.
Segment full_span(const MonthlySeries& series);

}  // namespace ipseries
