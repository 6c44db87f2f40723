#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ipseries/breaks/breakpoints.hpp"
#include "ipseries/core/segment.hpp"

namespace ipseries::breaks {

struct SegmentSet {
    std::vector<Segment> segments;
};

/// Stretches between clusters of nearby breaks in the two sets.
///
/// Breaks are merged chronologically and grouped so that each cluster holds at
/// most one break from each set. Segment k runs from the month after the later
/// break of cluster k-1 to the month before the earlier break of cluster k; the
/// first starts at `span.start` and the last ends at `span.end`. Empty stretches
/// are dropped and the rest labelled 1, 2, ...
SegmentSet derive_segments(const std::vector<MonthDate>& breaks_a,
                           const std::vector<MonthDate>& breaks_b, const Segment& span);
SegmentSet derive_segments(const BreakpointSet& a, const BreakpointSet& b, const Segment& span);

nlohmann::json to_json(const SegmentSet& s);

}  // namespace ipseries::breaks
