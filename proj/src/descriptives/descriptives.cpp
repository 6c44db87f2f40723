#include "ipseries/descriptives/descriptives.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ipseries/error.hpp"

namespace ipseries::descriptives {

double quantile(std::span<const double> values, double p) {
    if (values.empty()) throw Error(ErrorCode::Length, "quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::Parameter, fmt::format("quantile level {} outside [0,1]", p));
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    double h = static_cast<double>(v.size() - 1) * p;
    auto lo = static_cast<std::size_t>(std::floor(h));
    auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

SummaryStats summary_stats(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw Error(ErrorCode::Length, "summary statistics need at least 2 values");
    SummaryStats s;
    s.n = n;
    auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    s.min = *mn;
    s.max = *mx;
    s.q1 = quantile(values, 0.25);
    s.median = quantile(values, 0.5);
    s.q3 = quantile(values, 0.75);
    const double dn = static_cast<double>(n);
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / dn;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : values) {
        double d = v - s.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    s.sd = std::sqrt(m2 / (dn - 1));
    m2 /= dn;
    m3 /= dn;
    m4 /= dn;
    if (s.min == s.max || m2 <= 0.0)
        throw Error(ErrorCode::Degenerate, "constant sample: skewness and kurtosis undefined");
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2);
    return s;
}

SummaryStats summary_stats(const MonthlySeries& series) { return summary_stats(series.values()); }

std::string_view to_string(RankMethod m) noexcept {
    return m == RankMethod::Spearman ? "spearman" : "kendall";
}

std::vector<double> mid_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double r = (static_cast<double>(i + j) / 2.0) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

int sign(double v) { return (v > 0) - (v < 0); }

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    long long concordant_minus_discordant = 0, tied_x = 0, tied_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            int sx = sign(x[i] - x[j]);
            int sy = sign(y[i] - y[j]);
            if (sx == 0) ++tied_x;
            if (sy == 0) ++tied_y;
            concordant_minus_discordant += sx * sy;
        }
    }
    const double n0 = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return static_cast<double>(concordant_minus_discordant) /
           std::sqrt((n0 - static_cast<double>(tied_x)) * (n0 - static_cast<double>(tied_y)));
}

bool all_tied(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double a) { return a == v.front(); });
}

}  // namespace

double rank_correlation(std::span<const double> x, std::span<const double> y, RankMethod method) {
    if (x.size() != y.size())
        throw Error(ErrorCode::Dimension, fmt::format("length mismatch: {} vs {}", x.size(), y.size()));
    if (x.size() < 3) throw Error(ErrorCode::Length, "rank correlation needs at least 3 pairs");
    if (all_tied(x) || all_tied(y)) throw Error(ErrorCode::Degenerate, "zero variance: all values tied");
    if (method == RankMethod::Spearman) return pearson(mid_ranks(x), mid_ranks(y));
    return kendall_tau_b(x, y);
}

double rank_correlation(const MonthlySeries& x, const MonthlySeries& y, RankMethod method) {
    return rank_correlation(x.values(), y.values(), method);
}

Decomposition decompose_additive(const MonthlySeries& series) {
    const std::size_t n = series.size();
    if (n < 2 * kPeriod)
        throw Error(ErrorCode::Length, fmt::format("decomposition needs at least {} months, got {}", 2 * kPeriod, n));
    const auto x = series.values();
    const std::size_t half = kPeriod / 2;

    Decomposition d;
    d.start = series.start();
    d.observed.assign(x.begin(), x.end());
    d.trend.assign(n, std::nullopt);
    d.remainder.assign(n, std::nullopt);
    for (std::size_t t = half; t + half < n; ++t) {
        double s = 0.5 * (x[t - half] + x[t + half]);
        for (std::size_t k = t - half + 1; k < t + half; ++k) s += x[k];
        d.trend[t] = s / static_cast<double>(kPeriod);
    }

    // Figures are indexed by position within the cycle, then rotated to calendar months.
    std::vector<double> sum(kPeriod, 0.0);
    std::vector<int> count(kPeriod, 0);
    for (std::size_t t = 0; t < n; ++t) {
        if (!d.trend[t]) continue;
        sum[t % kPeriod] += x[t] - *d.trend[t];
        ++count[t % kPeriod];
    }
    std::vector<double> fig(kPeriod);
    for (std::size_t k = 0; k < kPeriod; ++k) fig[k] = sum[k] / count[k];
    double centre = std::accumulate(fig.begin(), fig.end(), 0.0) / static_cast<double>(kPeriod);
    for (double& f : fig) f -= centre;

    d.seasonal.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        d.seasonal[t] = fig[t % kPeriod];
        if (d.trend[t]) d.remainder[t] = x[t] - *d.trend[t] - d.seasonal[t];
    }
    d.figures.resize(kPeriod);
    for (std::size_t k = 0; k < kPeriod; ++k)
        d.figures[static_cast<std::size_t>(series.date_at(k).month() - 1)] = fig[k];
    return d;
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string(); }

nlohmann::json opt_array(const std::vector<std::optional<double>>& v) {
    auto a = nlohmann::json::array();
    for (const auto& e : v) a.push_back(e ? nlohmann::json(*e) : nlohmann::json(nullptr));
    return a;
}

}  // namespace

std::string decomposition_csv(const Decomposition& d) {
    std::string out = "date,observed,trend,seasonal,remainder\n";
    for (std::size_t t = 0; t < d.observed.size(); ++t) {
        out += fmt::format("{},{},{},{},{}\n", d.start.plus_months(static_cast<long>(t)).iso(),
                           d.observed[t], cell(d.trend[t]), d.seasonal[t], cell(d.remainder[t]));
    }
    return out;
}

nlohmann::json to_json(const SummaryStats& s) {
    return {{"n", s.n},         {"min", s.min},   {"q1", s.q1},
            {"median", s.median}, {"mean", s.mean}, {"q3", s.q3},
            {"max", s.max},     {"sd", s.sd},     {"skewness", s.skewness},
            {"kurtosis", s.kurtosis}};
}

nlohmann::json to_json(const Decomposition& d) {
    return {{"start", d.start.iso()},       {"period", d.period},
            {"observed", d.observed},       {"trend", opt_array(d.trend)},
            {"seasonal", d.seasonal},       {"remainder", opt_array(d.remainder)},
            {"seasonal_figures", d.figures}};
}

}  // namespace ipseries::descriptives
