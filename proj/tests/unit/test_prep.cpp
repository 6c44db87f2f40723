#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "ipseries/error.hpp"
#include "ipseries/prep/outliers.hpp"
#include "test_util.hpp"

using namespace ipseries;
using namespace ipseries::prep;
using ipseries::testing::as_series;
using ipseries::testing::cleaned;
using ipseries::testing::raw_series;

namespace {

std::set<std::string> flagged_dates(const OutlierReport& r) {
    std::set<std::string> out;
    for (const auto& f : r.flags) out.insert(f.date.iso());
    return out;
}

}  // namespace

TEST(Outliers, TrademarksRecall) {
    const auto got = flagged_dates(cleaned().trademark_report);
    for (const char* d : {"1982-09", "1989-11", "1999-06"}) EXPECT_TRUE(got.count(d)) << d;
    EXPECT_LE(got.size(), 3u + 3u);
}

TEST(Outliers, PatentsRecall) {
    const auto got = flagged_dates(cleaned().patent_report);
    for (const char* d : {"1982-09", "1995-06", "2007-10", "2013-03"}) EXPECT_TRUE(got.count(d)) << d;
    EXPECT_LE(got.size(), 4u + 3u);
}

TEST(Outliers, ReportInvariants) {
    for (const auto* r : {&cleaned().trademark_report, &cleaned().patent_report}) {
        for (std::size_t i = 0; i < r->flags.size(); ++i) {
            EXPECT_GE(r->flags[i].score, r->threshold);
            EXPECT_LT(r->flags[i].index, 472u);
            if (i) EXPECT_LT(r->flags[i - 1].index, r->flags[i].index);
        }
    }
}

TEST(Outliers, ReplacementExamples) {
    const auto tm = raw_series(Column::Trademarks);
    const auto pt = raw_series(Column::Patents);
    const auto i = tm.index_of(MonthDate(1982, 9));
    EXPECT_EQ(tm[i], 15843.0);
    EXPECT_DOUBLE_EQ(cleaned().trademarks[i], 3579.5);  // (5264 + 1895) / 2
    const auto j = pt.index_of(MonthDate(2013, 3));
    EXPECT_EQ(pt[j], 42788.0);
    EXPECT_DOUBLE_EQ(cleaned().patents[j], 21614.5);  // (23728 + 19501) / 2
}

TEST(Outliers, ReplaceChangesOnlyFlags) {
    const auto raw = raw_series(Column::Patents);
    const auto& rep = cleaned().patent_report;
    const auto& out = cleaned().patents;
    std::size_t changed = 0;
    for (std::size_t t = 0; t < raw.size(); ++t) {
        if (raw[t] != out[t]) {
            ++changed;
            EXPECT_TRUE(rep.flagged(t)) << t;
            EXPECT_DOUBLE_EQ(out[t], (raw[t - 1] + raw[t + 1]) / 2.0);
        }
    }
    EXPECT_EQ(changed, rep.flags.size());
}

TEST(Outliers, EmptyReportIsNoOp) {
    const auto raw = raw_series(Column::Trademarks);
    EXPECT_EQ(replace_outliers(raw, OutlierReport{}), raw);
}

TEST(Outliers, ReplaceErrors) {
    const auto s = as_series({1, 2, 3, 4, 5, 6});
    OutlierReport edge;
    edge.flags.push_back({0, s.start(), 1.0, 10.0, OutlierKind::Additive, 0.0});
    EXPECT_THROW(
        {
            try {
                replace_outliers(s, edge);
            } catch (const Error& e) {
                EXPECT_EQ(e.code(), ErrorCode::UnsupportedPosition);
                throw;
            }
        },
        Error);
    OutlierReport adjacent;
    adjacent.flags.push_back({2, s.date_at(2), 3.0, 10.0, OutlierKind::Additive, 0.0});
    adjacent.flags.push_back({3, s.date_at(3), 4.0, 10.0, OutlierKind::Additive, 0.0});
    try {
        replace_outliers(s, adjacent);
        ADD_FAILURE() << "adjacent flags accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Ambiguity);
    }
}

TEST(Outliers, TooShort) {
    try {
        detect_outliers(as_series(std::vector<double>(kMinOutlierLength - 1, 1.0)));
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Length);
    }
}

TEST(Outliers, ConstantSeriesIsDegenerate) {
    try {
        detect_outliers(as_series(std::vector<double>(120, 7.0)));
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Degenerate);
    }
}

TEST(Outliers, SinusoidSpike) {
    // Annual sinusoid, unit amplitude; a 20-sigma spike at t = 50.
    std::vector<double> x(144);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = std::sin(2 * std::numbers::pi * t / 12.0);
    x[50] += 20.0 / std::numbers::sqrt2;
    const auto r = detect_outliers(as_series(x));
    ASSERT_EQ(r.flags.size(), 1u);
    EXPECT_EQ(r.flags[0].index, 50u);
}

TEST(Outliers, SpikeInNoisySeasonalSeries) {
    ipseries::testing::Rng rng(11);
    std::vector<double> x(240);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = 100 + 10 * std::sin(2 * std::numbers::pi * t / 12.0) + rng.normal();
    x[120] += 25.0;
    const auto r = detect_outliers(as_series(x));
    EXPECT_TRUE(r.flagged(120));
    EXPECT_LE(r.flags.size(), 2u);
}

TEST(Outliers, InvariantUnderShift) {
    const auto raw = raw_series(Column::Trademarks);
    std::vector<double> shifted(raw.values().begin(), raw.values().end());
    for (auto& v : shifted) v += 12345.0;
    const auto a = detect_outliers(raw);
    const auto b = detect_outliers(raw.with_values(shifted));
    ASSERT_EQ(a.flags.size(), b.flags.size());
    for (std::size_t i = 0; i < a.flags.size(); ++i) {
        EXPECT_EQ(a.flags[i].index, b.flags[i].index);
        EXPECT_NEAR(a.flags[i].score, b.flags[i].score, 1e-6 * a.flags[i].score);
    }
}

TEST(Outliers, SecondPassScoresBounded) {
    // Re-running on repaired data never produces a flag scoring above the
    // strongest original flag.
    for (const auto& [raw, rep, out] : {std::tuple{raw_series(Column::Trademarks), cleaned().trademark_report, cleaned().trademarks},
                                       std::tuple{raw_series(Column::Patents), cleaned().patent_report, cleaned().patents}}) {
        double top = 0.0;
        for (const auto& f : rep.flags) top = std::max(top, f.score);
        for (const auto& f : detect_outliers(out).flags) {
            if (!rep.flagged(f.index)) {
                EXPECT_LE(f.score, top) << f.date.iso();
            }
        }
    }
}
