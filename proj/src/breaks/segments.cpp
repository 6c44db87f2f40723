#include "ipseries/breaks/segments.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace ipseries::breaks {

SegmentSet derive_segments(const std::vector<MonthDate>& breaks_a, const std::vector<MonthDate>& breaks_b,
                           const Segment& span) {
    struct Tagged {
        MonthDate date;
        int source;
    };
    std::vector<Tagged> all;
    for (const auto& d : breaks_a) all.push_back({d, 0});
    for (const auto& d : breaks_b) all.push_back({d, 1});
    std::stable_sort(all.begin(), all.end(), [](const Tagged& x, const Tagged& y) { return x.date < y.date; });

    struct Cluster {
        MonthDate first, last;
        bool has[2] = {false, false};
    };
    std::vector<Cluster> clusters;
    for (const auto& t : all) {
        if (clusters.empty() || clusters.back().has[t.source]) {
            clusters.push_back({t.date, t.date, {}});
        } else {
            clusters.back().last = t.date;
        }
        clusters.back().has[t.source] = true;
    }

    SegmentSet out;
    MonthDate from = span.start;
    auto emit = [&](const MonthDate& to) {
        if (!(to < from) && !(span.end < to)) out.segments.push_back({static_cast<int>(out.segments.size()) + 1, from, to});
    };
    for (const auto& c : clusters) {
        emit(c.first.plus_months(-1));
        from = std::max(from, c.last.plus_months(1));
    }
    emit(span.end);
    return out;
}

SegmentSet derive_segments(const BreakpointSet& a, const BreakpointSet& b, const Segment& span) {
    std::vector<MonthDate> da, db;
    for (const auto& br : a.breaks) da.push_back(br.date);
    for (const auto& br : b.breaks) db.push_back(br.date);
    return derive_segments(da, db, span);
}

nlohmann::json to_json(const SegmentSet& s) {
    auto a = nlohmann::json::array();
    for (const auto& seg : s.segments)
        a.push_back({{"label", seg.label}, {"start", seg.start.iso()}, {"end", seg.end.iso()}, {"length", seg.length()}});
    return a;
}

}  // namespace ipseries::breaks
