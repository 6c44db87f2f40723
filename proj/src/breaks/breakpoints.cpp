#include "ipseries/breaks/breakpoints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ipseries/error.hpp"

namespace ipseries::breaks {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Running sums of the centred data; centring keeps the RSS differences accurate.
class RssTable {
public:
    explicit RssTable(std::span<const double> y) : c1_(y.size() + 1, 0.0), c2_(y.size() + 1, 0.0) {
        double mean = 0.0;
        for (double v : y) mean += v;
        mean /= static_cast<double>(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            double v = y[i] - mean;
            c1_[i + 1] = c1_[i] + v;
            c2_[i + 1] = c2_[i] + v * v;
        }
    }
    double operator()(std::size_t i, std::size_t j) const {
        double m = static_cast<double>(j - i + 1);
        double s = c1_[j + 1] - c1_[i];
        return std::max(0.0, c2_[j + 1] - c2_[i] - s * s / m);
    }

private:
    std::vector<double> c1_, c2_;
};

struct DpSolution {
    std::vector<double> rss;                       // per m
    std::vector<std::vector<std::size_t>> breaks;  // per m
};

DpSolution solve_dp(std::span<const double> y, std::size_t h, std::size_t max_m) {
    const std::size_t n = y.size();
    RssTable rss(y);
    std::vector<std::vector<double>> cost(max_m + 1, std::vector<double>(n, kInf));
    std::vector<std::vector<std::size_t>> arg(max_m + 1, std::vector<std::size_t>(n, 0));
    for (std::size_t j = h - 1; j < n; ++j) cost[0][j] = rss(0, j);
    for (std::size_t m = 1; m <= max_m; ++m) {
        for (std::size_t j = (m + 1) * h - 1; j < n; ++j) {
            double best = kInf;
            std::size_t where = 0;
            // b is the last index of the previous regime.
            for (std::size_t b = m * h - 1; b + h <= j; ++b) {
                double v = cost[m - 1][b] + rss(b + 1, j);
                if (v < kInf && (best == kInf || v < best - 1e-12 * std::abs(best))) {
                    best = v;
                    where = b;
                }
            }
            cost[m][j] = best;
            arg[m][j] = where;
        }
    }
    DpSolution sol;
    for (std::size_t m = 0; m <= max_m; ++m) {
        sol.rss.push_back(cost[m][n - 1]);
        std::vector<std::size_t> bps;
        std::size_t j = n - 1;
        for (std::size_t k = m; k > 0; --k) {
            j = arg[k][j];
            bps.push_back(j);
        }
        std::reverse(bps.begin(), bps.end());
        sol.breaks.push_back(std::move(bps));
    }
    return sol;
}

std::size_t min_segment_for(std::size_t n, double h) {
    if (!(h > 0.0 && h < 1.0)) throw Error(ErrorCode::Parameter, fmt::format("h must lie in (0,1), got {}", h));
    auto nh = static_cast<std::size_t>(std::floor(static_cast<double>(n) * h + 1e-9));
    if (nh < 2)
        throw Error(ErrorCode::Parameter, fmt::format("minimum segment floor(n h) = {} is below 2 (n = {})", nh, n));
    return nh;
}

double log_norm_cdf(double z) {
    if (z > -30.0) return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
    // Asymptotic series for the far lower tail.
    double z2 = z * z;
    return -0.5 * z2 - std::log(-z) - 0.5 * std::log(2.0 * std::numbers::pi) +
           std::log1p(-1.0 / z2 + 3.0 / (z2 * z2));
}

double g_lower(double x, double xi, double phi) {
    x = std::abs(x);
    const double frac = xi / phi;
    const double log2pi = std::log(2.0 * std::numbers::pi);
    return -std::exp(0.5 * std::log(x) - x / 8.0 - 0.5 * log2pi) -
           (phi / xi * (phi + 2.0 * xi) / (phi + xi)) *
               std::exp(frac * (1.0 + frac) * x / 2.0 + log_norm_cdf(-(0.5 + frac) * std::sqrt(x))) +
           std::exp(std::log(x / 2.0 - 2.0 + (phi + 2.0 * xi) * (phi + 2.0 * xi) / ((phi + xi) * xi)) +
                    log_norm_cdf(-std::sqrt(x) / 2.0));
}

double g_upper(double x, double xi, double phi) {
    x = std::abs(x);
    const double frac = xi * xi / phi;
    const double log2pi = std::log(2.0 * std::numbers::pi);
    return 1.0 + std::sqrt(frac) * std::exp(0.5 * std::log(x) - frac * x / 8.0 - 0.5 * log2pi) +
           (xi / phi * (2.0 * phi + xi) / (phi + xi)) *
               std::exp((phi + xi) * x / 2.0 + log_norm_cdf(-(phi + xi / 2.0) / std::sqrt(phi) * std::sqrt(x))) -
           std::exp(std::log((2.0 * phi + xi) * (2.0 * phi + xi) / ((phi + xi) * phi) - 2.0 + frac * x / 2.0) +
                    log_norm_cdf(-std::sqrt(frac) * std::sqrt(x) / 2.0));
}

double solve_quantile(double target, double xi, double phi, bool upper) {
    auto f = [&](double x) { return argmax_cdf(x, xi, phi) - target; };
    double edge = upper ? 1.0 : -1.0;
    for (int i = 0; i < 60 && (upper ? f(edge) < 0.0 : f(edge) > 0.0); ++i) edge *= 2.0;
    boost::uintmax_t iters = 300;
    auto tol = boost::math::tools::eps_tolerance<double>(45);
    auto [a, b] = upper ? boost::math::tools::toms748_solve(f, 0.0, edge, tol, iters)
                        : boost::math::tools::toms748_solve(f, edge, -1e-12, tol, iters);
    return 0.5 * (a + b);
}

struct Moments {
    double mean = 0.0;
    double var = 0.0;  // n denominator
};

Moments moments(std::span<const double> v) {
    Moments m;
    for (double x : v) m.mean += x;
    m.mean /= static_cast<double>(v.size());
    for (double x : v) m.var += (x - m.mean) * (x - m.mean);
    m.var /= static_cast<double>(v.size());
    return m;
}

}  // namespace

double segment_rss(std::span<const double> y, std::size_t i, std::size_t j) {
    if (i > j || j >= y.size()) throw Error(ErrorCode::Bounds, "invalid segment");
    return RssTable(y.subspan(i, j - i + 1))(0, j - i);
}

std::vector<std::size_t> optimal_breaks(std::span<const double> y, std::size_t min_segment, std::size_t m,
                                        double* rss_out) {
    if (min_segment < 1 || (m + 1) * min_segment > y.size())
        throw Error(ErrorCode::Parameter,
                    fmt::format("{} breaks with minimum segment {} do not fit in {} observations", m, min_segment,
                                y.size()));
    auto sol = solve_dp(y, min_segment, m);
    if (rss_out) *rss_out = sol.rss[m];
    return sol.breaks[m];
}

BreakpointSet date_breakpoints(std::span<const double> y, double h, std::size_t max_breaks) {
    const std::size_t n = y.size();
    const std::size_t nh = min_segment_for(n, h);
    const auto cap = static_cast<std::size_t>(std::floor(1.0 / h + 1e-9)) - 1;
    if (max_breaks > cap)
        throw Error(ErrorCode::Parameter, fmt::format("max_breaks = {} exceeds floor(1/h) - 1 = {}", max_breaks, cap));
    if ((max_breaks + 1) * nh > n)
        throw Error(ErrorCode::Parameter,
                    fmt::format("{} breaks with minimum segment {} do not fit in {} observations", max_breaks, nh, n));

    auto sol = solve_dp(y, nh, max_breaks);
    BreakpointSet out;
    out.n = n;
    out.min_segment = nh;
    out.rss_by_m = sol.rss;
    out.breaks_by_m = sol.breaks;
    const double dn = static_cast<double>(n);
    std::size_t best = 0;
    for (std::size_t m = 0; m <= max_breaks; ++m) {
        double r = sol.rss[m];
        double bic = (r > 0.0 ? dn * std::log(r / dn) : -kInf) + 2.0 * static_cast<double>(m + 1) * std::log(dn);
        out.bic_by_m.push_back(bic);
        if (bic < out.bic_by_m[best]) best = m;
    }
    out.rss = sol.rss[best];
    out.bic = out.bic_by_m[best];
    for (auto idx : sol.breaks[best]) {
        Break b;
        b.index = b.ci_low_index = b.ci_high_index = idx;
        out.breaks.push_back(b);
    }
    return out;
}

namespace {

void fill_dates(BreakpointSet& b) {
    for (auto& br : b.breaks) {
        br.date = b.start.plus_months(static_cast<long>(br.index));
        br.ci_low = b.start.plus_months(static_cast<long>(br.ci_low_index));
        br.ci_high = b.start.plus_months(static_cast<long>(br.ci_high_index));
    }
}

}  // namespace

BreakpointSet date_breakpoints(const MonthlySeries& series, double h, std::size_t max_breaks) {
    auto b = date_breakpoints(series.values(), h, max_breaks);
    b.start = series.start();
    fill_dates(b);
    return b;
}

double argmax_cdf(double x, double xi, double phi) {
    if (!(xi > 0.0) || !(phi > 0.0))
        throw Error(ErrorCode::Parameter, "argmax distribution needs positive xi and phi");
    if (x == 0.0) x = -std::numeric_limits<double>::min();
    return x < 0.0 ? g_lower(x, xi, phi) : g_upper(x, xi, phi);
}

BreakpointSet breakpoint_confint(std::span<const double> y, const BreakpointSet& bps, double level,
                                 CiConvention convention) {
    if (!(level > 0.0 && level < 1.0))
        throw Error(ErrorCode::Parameter, fmt::format("confidence level must lie in (0,1), got {}", level));
    if (y.size() != bps.n)
        throw Error(ErrorCode::Dimension, fmt::format("series has {} points, breakpoints were fitted on {}", y.size(), bps.n));
    BreakpointSet out = bps;
    out.level = level;
    const double tail = (1.0 - level) / 2.0;
    const std::size_t n = y.size();

    for (std::size_t i = 0; i < out.breaks.size(); ++i) {
        auto& br = out.breaks[i];
        const std::size_t lo_edge = i == 0 ? 0 : out.breaks[i - 1].index + 1;
        const std::size_t hi_edge = i + 1 == out.breaks.size() ? n - 1 : out.breaks[i + 1].index;
        const auto before = moments(y.subspan(lo_edge, br.index - lo_edge + 1));
        const auto after = moments(y.subspan(br.index + 1, hi_edge - br.index));
        const double delta = after.mean - before.mean;

        br.ci_widened = false;
        double v1 = before.var, v2 = after.var;
        if (!(v1 > 0.0) || !(v2 > 0.0)) {
            br.ci_widened = true;
            double pooled = std::max(v1, v2);
            v1 = v1 > 0.0 ? v1 : pooled;
            v2 = v2 > 0.0 ? v2 : pooled;
        }
        if (!(delta != 0.0) || !(v1 > 0.0)) {
            br.ci_widened = true;
            br.ci_low_index = lo_edge;
            br.ci_high_index = hi_edge;
            continue;
        }

        double phi = 0.0, scale = 0.0;
        if (convention == CiConvention::Textbook) {
            phi = v2 / v1;
            scale = v1 / (delta * delta);
        } else {
            phi = std::sqrt(v1) / std::sqrt(v2);
            scale = v2 / (delta * delta);
        }
        const double qlo = solve_quantile(tail, 1.0, phi, false);
        const double qhi = solve_quantile(1.0 - tail, 1.0, phi, true);
        const double b = static_cast<double>(br.index);
        double lo = std::floor(b + qlo * scale);
        double hi = std::ceil(b + qhi * scale);
        if (lo < 0.0) {
            lo = 0.0;
            br.ci_widened = true;
        }
        if (hi > static_cast<double>(n - 1)) {
            hi = static_cast<double>(n - 1);
            br.ci_widened = true;
        }
        br.ci_low_index = static_cast<std::size_t>(lo);
        br.ci_high_index = static_cast<std::size_t>(hi);
    }
    fill_dates(out);
    return out;
}

BreakpointSet breakpoint_confint(const MonthlySeries& series, const BreakpointSet& bps, double level,
                                 CiConvention convention) {
    auto b = breakpoint_confint(series.values(), bps, level, convention);
    b.start = series.start();
    fill_dates(b);
    return b;
}

nlohmann::json to_json(const BreakpointSet& b) {
    auto breaks = nlohmann::json::array();
    for (const auto& br : b.breaks) {
        nlohmann::json j = {{"index", br.index}, {"date", br.date.iso()}};
        if (b.level > 0.0) {
            j["ci_low"] = br.ci_low.iso();
            j["ci_high"] = br.ci_high.iso();
            j["ci_widened"] = br.ci_widened;
        }
        breaks.push_back(j);
    }
    return {{"n", b.n},
            {"min_segment", b.min_segment},
            {"m", b.m()},
            {"rss", b.rss},
            {"bic", b.bic},
            {"level", b.level},
            {"rss_by_m", b.rss_by_m},
            {"bic_by_m", b.bic_by_m},
            {"breaks", breaks}};
}

std::string to_csv(const BreakpointSet& b) {
    std::string out = "ci_low,date,ci_high\n";
    for (const auto& br : b.breaks) out += fmt::format("{},{},{}\n", br.ci_low.iso(), br.date.iso(), br.ci_high.iso());
    return out;
}

}  // namespace ipseries::breaks
