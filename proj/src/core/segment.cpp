#include "ipseries/core/segment.hpp"

#include <fmt/format.h>

#include "ipseries/error.hpp"

namespace ipseries {

MonthlySeries slice_segment(const MonthlySeries& series, const Segment& seg) {
    if (seg.end < seg.start)
        throw Error(ErrorCode::Bounds, fmt::format("segment {}..{} is reversed", seg.start.iso(),
                                                   seg.end.iso()));
    if (!series.contains(seg.start) || !series.contains(seg.end))
        throw Error(ErrorCode::Bounds,
                    fmt::format("segment {}..{} outside series span {}..{}", seg.start.iso(),
                                seg.end.iso(), series.start().iso(), series.end().iso()));
    auto first = series.index_of(seg.start);
    auto count = static_cast<std::size_t>(seg.length());
    auto v = series.values().subspan(first, count);
    return {seg.start, std::vector<double>(v.begin(), v.end())};
}

Segment full_span(const MonthlySeries& series) { return {0, series.start(), series.end()}; }

}  // namespace ipseries
