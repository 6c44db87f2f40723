#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "ipseries/breaks/breakpoints.hpp"
#include "ipseries/breaks/segments.hpp"
#include "ipseries/error.hpp"
#include "ipseries/integration/cointegration.hpp"
#include "ipseries/integration/unit_root.hpp"
#include "test_util.hpp"

using namespace ipseries;
using namespace ipseries::integration;
using ipseries::testing::cleaned;
using ipseries::testing::Rng;

namespace {

std::vector<double> diff(const std::vector<double>& x) {
    std::vector<double> d(x.size() - 1);
    for (std::size_t t = 1; t < x.size(); ++t) d[t - 1] = x[t] - x[t - 1];
    return d;
}

const std::vector<Segment>& cleaned_segments() {
    static const auto segs = [] {
        const auto& c = cleaned();
        return breaks::derive_segments(breaks::date_breakpoints(c.trademarks), breaks::date_breakpoints(c.patents),
                                       full_span(c.trademarks))
            .segments;
    }();
    return segs;
}

std::vector<double> segment_values(const MonthlySeries& s, int label) {
    const auto& seg = cleaned_segments().at(static_cast<std::size_t>(label - 1));
    const auto part = slice_segment(s, seg);
    return {part.values().begin(), part.values().end()};
}

// Textbook OLS via QR; returns coefficients and their standard errors.
std::pair<Eigen::VectorXd, Eigen::VectorXd> ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const Eigen::VectorXd b = X.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd e = y - X * b;
    const double s2 = e.squaredNorm() / static_cast<double>(X.rows() - X.cols());
    const Eigen::MatrixXd cov = s2 * (X.transpose() * X).inverse();
    return {b, cov.diagonal().cwiseSqrt()};
}

template <class F>
double fraction(std::size_t trials, F&& trial) {
    std::size_t hits = 0;
    for (std::size_t r = 0; r < trials; ++r) hits += trial() ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace

// ---------------------------------------------------------------- KPSS

TEST(Kpss, StatisticMatchesDirectFormula) {
    Rng rng(101);
    const auto x = rng.ar1(150, 0.5);
    const auto n = static_cast<double>(x.size());
    double mean = 0;
    for (double v : x) mean += v;
    mean /= n;
    std::vector<double> e(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) e[t] = x[t] - mean;
    const std::size_t l = static_cast<std::size_t>(std::floor(4 * std::pow(n / 100, 0.25)));
    double lrv = 0;
    for (double v : e) lrv += v * v;
    for (std::size_t j = 1; j <= l; ++j) {
        double g = 0;
        for (std::size_t t = j; t < e.size(); ++t) g += e[t] * e[t - j];
        lrv += 2 * (1 - static_cast<double>(j) / static_cast<double>(l + 1)) * g;
    }
    lrv /= n;
    double s = 0, eta = 0;
    for (double v : e) s += v, eta += s * s;
    const double expected = eta / (n * n * lrv);

    const auto r = kpss_test(x);
    EXPECT_EQ(r.lags, l);
    EXPECT_NEAR(r.statistic, expected, 1e-10 * expected);
    EXPECT_NEAR(long_run_variance(e, l), lrv, 1e-12);
}

TEST(Kpss, BartlettRule) {
    EXPECT_EQ(bartlett_lags(100), 4u);
    EXPECT_EQ(bartlett_lags(472), 5u);
    EXPECT_EQ(bartlett_lags(60), 3u);
}

TEST(Kpss, MonteCarlo) {
    Rng rng(102);
    EXPECT_GE(fraction(300, [&] { return !kpss_test(rng.noise(500)).reject; }), 0.90);
    EXPECT_GE(fraction(300, [&] { return kpss_test(rng.random_walk(500)).reject; }), 0.90);
}

TEST(Kpss, AffineInvariance) {
    Rng rng(103);
    const auto x = rng.random_walk(200);
    std::vector<double> z(x.size());
    std::transform(x.begin(), x.end(), z.begin(), [](double v) { return 4.5 * v + 1e4; });
    EXPECT_NEAR(kpss_test(x).statistic, kpss_test(z).statistic, 1e-9);
}

TEST(Kpss, Errors) {
    EXPECT_THROW(kpss_test(std::vector<double>(11, 1.0)), Error);
    EXPECT_THROW(kpss_test(std::vector<double>(50, 3.0)), Error);
}

// ---------------------------------------------------------------- ADF / PP

TEST(Adf, StatisticMatchesOlsOracle) {
    Rng rng(111);
    const auto x = rng.random_walk(120);
    const std::size_t k = 3;
    const auto d = diff(x);
    // Δy_t on (1, y_{t-1}, Δy_{t-1..k}) for t with all lags available.
    const std::size_t rows = d.size() - k;
    Eigen::MatrixXd X(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(2 + k));
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows));
    for (std::size_t i = 0; i < rows; ++i) {
        const std::size_t t = i + k;  // index into d
        const auto r = static_cast<Eigen::Index>(i);
        y(r) = d[t];
        X(r, 0) = 1.0;
        X(r, 1) = x[t];
        for (std::size_t j = 1; j <= k; ++j) X(r, static_cast<Eigen::Index>(1 + j)) = d[t - j];
    }
    const auto [b, se] = ols(X, y);
    const auto res = adf_test(x, k);
    EXPECT_EQ(res.lags, k);
    EXPECT_EQ(res.nobs, rows);
    EXPECT_NEAR(res.statistic, b(1) / se(1), 1e-9);
}

TEST(Adf, DefaultLagRule) {
    Rng rng(112);
    EXPECT_EQ(adf_test(rng.noise(500)).lags, static_cast<std::size_t>(std::floor(std::cbrt(499.0))));
}

TEST(Adf, MonteCarlo) {
    Rng rng(113);
    EXPECT_GE(fraction(300, [&] { return !adf_test(rng.random_walk(500)).reject; }), 0.90);
    EXPECT_GE(fraction(300, [&] { return adf_test(rng.ar1(500, 0.3)).reject; }), 0.90);
    EXPECT_GE(fraction(300, [&] { return adf_test(diff(rng.random_walk(500))).reject; }), 0.90);
}

TEST(Pp, MonteCarloAndAgreementWithAdf) {
    Rng rng(114);
    std::size_t agree = 0, total = 0;
    double rw_keep = 0, ar_reject = 0;
    const std::size_t trials = 300;
    for (std::size_t r = 0; r < trials; ++r) {
        const auto w = rng.random_walk(500);
        const auto a = rng.ar1(500, 0.3);
        const auto pw = pp_test(w), pa = pp_test(a);
        rw_keep += !pw.reject;
        ar_reject += pa.reject;
        agree += (pw.reject == adf_test(w).reject) + (pa.reject == adf_test(a).reject);
        total += 2;
    }
    EXPECT_GE(rw_keep / trials, 0.90);
    EXPECT_GE(ar_reject / trials, 0.90);
    EXPECT_GE(static_cast<double>(agree) / static_cast<double>(total), 0.85);
}

TEST(Pp, WhiteNoiseRejectsUnitRoot) {
    Rng rng(115);
    EXPECT_TRUE(pp_test(rng.noise(300)).reject);
}

TEST(DickeyFuller, PvalueTable) {
    bool clamped = false;
    // Asymptotic constant-only critical values: -3.43 (1%), -2.86 (5%), -2.57 (10%).
    EXPECT_NEAR(dickey_fuller_pvalue(-2.86, 100000), 0.05, 0.003);
    EXPECT_NEAR(dickey_fuller_pvalue(-2.57, 100000), 0.10, 0.005);
    EXPECT_NEAR(dickey_fuller_pvalue(-3.43, 100000), 0.01, 0.002);
    EXPECT_DOUBLE_EQ(dickey_fuller_pvalue(-10.0, 200, &clamped), 0.01);
    EXPECT_TRUE(clamped);
    EXPECT_DOUBLE_EQ(dickey_fuller_pvalue(3.0, 200, &clamped), 0.99);
    EXPECT_TRUE(clamped);
    double prev = 0;
    for (double s = -4.5; s <= 1.0; s += 0.1) {
        const double p = dickey_fuller_pvalue(s, 150);
        EXPECT_GE(p, prev);
        prev = p;
    }
    // Small samples have fatter left tails.
    EXPECT_GT(dickey_fuller_pvalue(-3.0, 25), dickey_fuller_pvalue(-3.0, 500));
}

TEST(UnitRoot, Errors) {
    EXPECT_THROW(adf_test(std::vector<double>(8, 0.0), 5), Error);
    EXPECT_THROW(pp_test(std::vector<double>(3, 1.0)), Error);
}

// ---------------------------------------------------------------- ndiffs

TEST(Ndiffs, WhiteNoiseIsStationary) {
    Rng rng(121);
    for (auto test : kAllUnitRootTests)
        EXPECT_GE(fraction(200, [&] { return ndiffs(rng.noise(300), test).d == 0; }), 0.90) << to_string(test);
}

TEST(Ndiffs, DifferencingProperty) {
    Rng rng(122);
    for (auto test : kAllUnitRootTests) {
        const double f = fraction(200, [&] {
            const auto x = rng.random_walk(400);
            const int d = ndiffs(x, test).d;
            return ndiffs(diff(x), test).d == std::max(d - 1, 0);
        });
        EXPECT_GE(f, 0.85) << to_string(test);
    }
}

TEST(Ndiffs, CapAtTwo) {
    // A quadratic-in-time random walk needs more than two differences for KPSS
    // with probability near one; the order is capped and flagged.
    Rng rng(123);
    std::vector<double> x(400, 0.0);
    double a = 0, b = 0;
    for (auto& v : x) b += rng.normal(), a += b, v = a;
    const auto o = ndiffs(x, UnitRootTest::Kpss, {.alpha = 0.05, .max_d = 0});
    EXPECT_EQ(o.d, 0);
    EXPECT_TRUE(o.capped);
}

TEST(Ndiffs, ReportedCells) {
    const auto& c = cleaned();
    const std::vector<double> tm(c.trademarks.values().begin(), c.trademarks.values().end());
    const std::vector<double> pt(c.patents.values().begin(), c.patents.values().end());
    for (auto test : kAllUnitRootTests) {
        EXPECT_EQ(ndiffs(tm, test).d, 1) << to_string(test);
        EXPECT_EQ(ndiffs(pt, test).d, 1) << to_string(test);
        EXPECT_EQ(ndiffs(segment_values(c.patents, 6), test).d, 0) << to_string(test);
    }
    EXPECT_EQ(ndiffs(segment_values(c.trademarks, 5), UnitRootTest::Pp).d, 0);
    EXPECT_TRUE(kpss_test(tm).reject);
    EXPECT_FALSE(adf_test(pt).reject);
}

// ---------------------------------------------------------------- Johansen

TEST(Johansen, InvariantsAndSwap) {
    Rng rng(131);
    for (int r = 0; r < 50; ++r) {
        const auto x = rng.random_walk(200);
        auto y = rng.random_walk(200);
        if (r % 2) for (std::size_t t = 0; t < y.size(); ++t) y[t] = x[t] + rng.normal();
        const auto a = johansen_trace(x, y), b = johansen_trace(y, x);
        ASSERT_EQ(a.eigenvalues.size(), 2u);
        EXPECT_GE(a.eigenvalues[0], a.eigenvalues[1]);
        for (double l : a.eigenvalues) {
            EXPECT_GE(l, 0.0);
            EXPECT_LT(l, 1.0);
        }
        EXPECT_GE(a.trace[0], a.trace[1]);
        EXPECT_GE(a.trace[1], 0.0);
        for (int k = 0; k < 2; ++k) EXPECT_NEAR(a.trace[k], b.trace[k], 1e-9 * std::max(1.0, a.trace[k]));
        EXPECT_EQ(a.nobs, 198u);
    }
}

TEST(Johansen, TraceFromEigenvalues) {
    Rng rng(132);
    const auto r = johansen_trace(rng.random_walk(300), rng.random_walk(300), 3);
    const double T = static_cast<double>(r.nobs);
    EXPECT_NEAR(r.trace[1], -T * std::log(1 - r.eigenvalues[1]), 1e-9);
    EXPECT_NEAR(r.trace[0], -T * (std::log(1 - r.eigenvalues[0]) + std::log(1 - r.eigenvalues[1])), 1e-9);
    EXPECT_EQ(r.lags, 3u);
}

TEST(Johansen, CriticalValues) {
    Rng rng(133);
    const auto r = johansen_trace(rng.random_walk(100), rng.random_walk(100));
    const std::array<std::array<double, 3>, 2> want{{{17.85, 19.96, 24.60}, {7.52, 9.24, 12.97}}};
    EXPECT_EQ(r.critical, want);
}

TEST(Johansen, KnownRankOne) {
    Rng rng(134);
    std::size_t good = 0;
    const std::size_t trials = 200;
    for (std::size_t k = 0; k < trials; ++k) {
        const auto x = rng.random_walk(500);
        std::vector<double> y(x.size());
        for (std::size_t t = 0; t < y.size(); ++t) y[t] = x[t] + rng.normal();
        const auto r = johansen_trace(x, y);
        good += r.trace[0] > r.critical[0][2] && r.trace[1] < r.critical[1][1];
    }
    EXPECT_GE(static_cast<double>(good) / trials, 0.90);
}

TEST(Johansen, ReportedValues) {
    const auto& c = cleaned();
    const auto full = johansen_trace(c.trademarks, c.patents);
    EXPECT_NEAR(full.trace[0], 75.47, 0.10 * 75.47);
    EXPECT_GT(full.trace[0], 24.60);
    EXPECT_LT(full.trace[1], 9.24);
    EXPECT_DOUBLE_EQ(full.rejected_at(0), 0.01);

    const auto s5 = johansen_trace(segment_values(c.trademarks, 5), segment_values(c.patents, 5));
    EXPECT_NEAR(s5.trace[1], 11.58, 0.15 * 11.58);
    EXPECT_GT(s5.trace[1], 9.24);
}

TEST(Johansen, Errors) {
    Rng rng(135);
    const auto x = rng.random_walk(50);
    EXPECT_THROW(johansen_trace(x, rng.random_walk(49)), Error);
    EXPECT_THROW(johansen_trace(x, x, 1), Error);
    EXPECT_THROW(johansen_trace(std::vector<double>(9, 1.0), std::vector<double>(9, 2.0)), Error);
    EXPECT_THROW(johansen_trace(x, x), Error);  // collinear pair
}

// ---------------------------------------------------------------- Phillips-Ouliaris

TEST(Pz, IndependentRandomWalksUnderNull) {
    Rng rng(141);
    EXPECT_GE(fraction(300, [&] { return phillips_ouliaris_pz(rng.random_walk(500), rng.random_walk(500)).statistic < 40.8217; }),
              0.90);
}

TEST(Pz, CointegratedPairRejects) {
    Rng rng(142);
    EXPECT_GE(fraction(100, [&] {
                  const auto x = rng.random_walk(500);
                  std::vector<double> y(x.size());
                  for (std::size_t t = 0; t < y.size(); ++t) y[t] = 2 * x[t] + rng.normal();
                  return phillips_ouliaris_pz(x, y).rejected_at() > 0;
              }),
              0.90);
}

TEST(Pz, SwapInvariantAndNonNegative) {
    Rng rng(143);
    const auto x = rng.random_walk(300), y = rng.random_walk(300);
    const auto a = phillips_ouliaris_pz(x, y), b = phillips_ouliaris_pz(y, x);
    EXPECT_GE(a.statistic, 0.0);
    EXPECT_NEAR(a.statistic, b.statistic, 1e-9 * a.statistic);
    EXPECT_DOUBLE_EQ(a.critical[0], 40.8217);
    EXPECT_DOUBLE_EQ(a.critical[1], 55.1911);
}

TEST(Pz, ReportedValues) {
    const auto& c = cleaned();
    const auto full = phillips_ouliaris_pz(c.trademarks, c.patents);
    EXPECT_NEAR(full.statistic, 222.6575, 0.15 * 222.6575);
    EXPECT_DOUBLE_EQ(full.rejected_at(), 0.01);
    const auto s3 = phillips_ouliaris_pz(segment_values(c.trademarks, 3), segment_values(c.patents, 3));
    EXPECT_GT(s3.statistic, 40.8217);
    EXPECT_LT(s3.statistic, 55.1911);
}

TEST(Pz, Errors) {
    Rng rng(144);
    const auto x = rng.random_walk(50);
    EXPECT_THROW(phillips_ouliaris_pz(x, rng.random_walk(40)), Error);
    EXPECT_THROW(phillips_ouliaris_pz(std::vector<double>(5, 1.0), std::vector<double>(5, 1.0)), Error);
}
