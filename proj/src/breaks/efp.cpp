#include "ipseries/breaks/efp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ipseries/error.hpp"

namespace ipseries::breaks {

namespace {

#include "mosum_table.inc"

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

std::size_t window(std::size_t n, double h) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * h + 1e-9));
}

std::vector<double> cumulative(std::span<const double> e) {
    std::vector<double> c(e.size() + 1, 0.0);
    for (std::size_t i = 0; i < e.size(); ++i) c[i + 1] = c[i] + e[i];
    return c;
}

// Solves p(x) = alpha for a decreasing p-value function.
template <class F>
double invert_pvalue(F pvalue, double alpha) {
    double hi = 1.0;
    while (pvalue(hi) > alpha) hi *= 2.0;
    boost::uintmax_t iters = 200;
    auto [a, b] = boost::math::tools::toms748_solve([&](double x) { return pvalue(x) - alpha; }, 1e-6, hi,
                                                    boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (a + b);
}

}  // namespace

std::string_view to_string(EfpKind kind) noexcept {
    switch (kind) {
        case EfpKind::OlsCusum: return "OLS-CUSUM";
        case EfpKind::OlsMosum: return "OLS-MOSUM";
        case EfpKind::RecCusum: return "Rec-CUSUM";
        case EfpKind::RecMosum: return "Rec-MOSUM";
    }
    return "?";
}

bool is_mosum(EfpKind kind) noexcept { return kind == EfpKind::OlsMosum || kind == EfpKind::RecMosum; }
bool is_recursive(EfpKind kind) noexcept { return kind == EfpKind::RecCusum || kind == EfpKind::RecMosum; }

double FluctuationProcess::time(std::size_t k) const {
    if (!is_mosum(kind)) return path.size() > 1 ? static_cast<double>(k) / static_cast<double>(path.size() - 1) : 0.0;
    // A MOSUM point summarises the window ending at its right edge; place it at the centre.
    const std::size_t m = is_recursive(kind) ? n - 1 : n;
    const double nh = static_cast<double>(window(n, bandwidth));
    return (static_cast<double>(k) + nh / 2.0) / static_cast<double>(m);
}

std::vector<double> recursive_residuals(std::span<const double> y) {
    std::vector<double> w;
    if (y.size() < 2) return w;
    w.reserve(y.size() - 1);
    double sum = y[0];
    for (std::size_t r = 1; r < y.size(); ++r) {
        const double k = static_cast<double>(r);  // observations already seen
        w.push_back((y[r] - sum / k) / std::sqrt(1.0 + 1.0 / k));
        sum += y[r];
    }
    return w;
}

FluctuationProcess efp(std::span<const double> y, EfpKind kind, double h) {
    const std::size_t n = y.size();
    if (is_mosum(kind) && !(h > 0.0 && h < 1.0))
        throw Error(ErrorCode::Parameter, fmt::format("bandwidth must lie in (0,1), got {}", h));
    if (n < (is_recursive(kind) ? 3u : 2u))
        throw Error(ErrorCode::Length, fmt::format("{} needs more observations (n = {})", to_string(kind), n));

    FluctuationProcess p;
    p.kind = kind;
    p.n = n;
    p.bandwidth = is_mosum(kind) ? h : 0.0;

    std::vector<double> e;
    if (is_recursive(kind)) {
        e = recursive_residuals(y);
        const double m = mean_of(e);
        double ss = 0.0;
        for (double v : e) ss += (v - m) * (v - m);
        p.sigma = std::sqrt(ss / static_cast<double>(e.size() - 1));
    } else {
        const double m = mean_of(y);
        e.reserve(n);
        double ss = 0.0;
        for (double v : y) {
            e.push_back(v - m);
            ss += (v - m) * (v - m);
        }
        p.sigma = std::sqrt(ss / static_cast<double>(n - 1));
    }

    const bool flat = std::all_of(e.begin(), e.end(), [](double v) { return v == 0.0; });
    if (!flat && !(p.sigma > 0.0))
        throw Error(ErrorCode::Degenerate, fmt::format("{}: residuals have zero variance", to_string(kind)));
    const double scale = flat ? 0.0 : 1.0 / (p.sigma * std::sqrt(static_cast<double>(e.size())));

    auto c = cumulative(e);
    if (!is_mosum(kind)) {
        p.path.resize(c.size());
        for (std::size_t k = 0; k < c.size(); ++k) p.path[k] = c[k] * scale;
        if (kind == EfpKind::OlsCusum) p.path.back() = 0.0;  // exact by construction
    } else {
        const std::size_t nh = window(n, h);
        if (nh < 2 || nh > e.size())
            throw Error(ErrorCode::Length, fmt::format("MOSUM window floor(n h) = {} is unusable for n = {}", nh, n));
        p.path.resize(e.size() - nh + 1);
        for (std::size_t k = 0; k < p.path.size(); ++k) p.path[k] = (c[k + nh] - c[k]) * scale;
    }
    return p;
}

FluctuationProcess efp(const MonthlySeries& series, EfpKind kind, double h) {
    return efp(series.values(), kind, h);
}

double brownian_bridge_sup_pvalue(double x) {
    if (x <= 0.0) return 1.0;
    if (x < 1.0) {
        // Theta-function form converges quickly for small x.
        double s = 0.0;
        for (int k = 1; k <= 50; ++k) {
            double a = (2.0 * k - 1.0) * std::numbers::pi / x;
            s += std::exp(-a * a / 8.0);
        }
        return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / x * s, 0.0, 1.0);
    }
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * x * x);
        s += (k % 2 == 1 ? term : -term);
        if (term < 1e-300) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

double brownian_linear_boundary_pvalue(double x) {
    if (x <= 0.0) return 1.0;
    if (x < 0.3) return 1.0 - 0.1465 * x;
    double p = 2.0 * (1.0 - norm_cdf(3.0 * x) + std::exp(-4.0 * x * x) * (norm_cdf(x) + norm_cdf(5.0 * x) - 1.0) -
                      std::exp(-16.0 * x * x) * (1.0 - norm_cdf(x)));
    return std::clamp(p, 0.0, 1.0);
}

std::span<const double> mosum_levels() noexcept { return kMosumLevels; }

double mosum_critical_value(EfpKind kind, double h, double alpha) {
    if (!is_mosum(kind)) throw Error(ErrorCode::Parameter, "critical table exists for MOSUM processes only");
    const auto& table = kind == EfpKind::OlsMosum ? kOlsMosumCritical : kRecMosumCritical;
    auto lvl = std::find_if(kMosumLevels.begin(), kMosumLevels.end(),
                            [&](double a) { return std::abs(a - alpha) < 1e-12; });
    if (lvl == kMosumLevels.end())
        throw Error(ErrorCode::Parameter, fmt::format("no MOSUM critical values for alpha = {}", alpha));
    const auto col = static_cast<std::size_t>(lvl - kMosumLevels.begin());
    const double hc = std::clamp(h, kMosumBandwidths.front(), kMosumBandwidths.back());
    std::size_t i = 0;
    while (i + 2 < kMosumBandwidths.size() && hc > kMosumBandwidths[i + 1]) ++i;
    const double w = (hc - kMosumBandwidths[i]) / (kMosumBandwidths[i + 1] - kMosumBandwidths[i]);
    return (1.0 - w) * table[i][col] + w * table[i + 1][col];
}

ScTestResult sctest(const FluctuationProcess& process, double alpha) {
    if (process.path.empty()) throw Error(ErrorCode::Length, "empty fluctuation process");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error(ErrorCode::Parameter, fmt::format("alpha must lie in (0,1), got {}", alpha));
    ScTestResult r;
    switch (process.kind) {
        case EfpKind::OlsCusum:
            for (double v : process.path) r.statistic = std::max(r.statistic, std::abs(v));
            r.p_value = brownian_bridge_sup_pvalue(r.statistic);
            break;
        case EfpKind::RecCusum:
            for (std::size_t k = 0; k < process.path.size(); ++k)
                r.statistic = std::max(r.statistic, std::abs(process.path[k]) / (1.0 + 2.0 * process.time(k)));
            r.p_value = brownian_linear_boundary_pvalue(r.statistic);
            break;
        case EfpKind::OlsMosum:
        case EfpKind::RecMosum: {
            for (double v : process.path) r.statistic = std::max(r.statistic, std::abs(v));
            std::array<double, kMosumLevels.size()> cv{};
            for (std::size_t i = 0; i < cv.size(); ++i)
                cv[i] = mosum_critical_value(process.kind, process.bandwidth, kMosumLevels[i]);
            if (r.statistic >= cv.back()) {
                r.p_value = kMosumLevels.back();
                r.p_is_table_floor = true;
            } else if (r.statistic <= cv.front()) {
                r.p_value = 1.0 - (1.0 - kMosumLevels.front()) * r.statistic / cv.front();
            } else {
                std::size_t i = 0;
                while (r.statistic > cv[i + 1]) ++i;
                double w = (r.statistic - cv[i]) / (cv[i + 1] - cv[i]);
                r.p_value = (1.0 - w) * kMosumLevels[i] + w * kMosumLevels[i + 1];
            }
            break;
        }
    }
    // The series forms underflow to 0 for very large statistics; keep p in (0, 1].
    r.p_value = std::max(r.p_value, std::numeric_limits<double>::min());
    r.reject = r.p_value < alpha;
    return r;
}

double boundary(const FluctuationProcess& process, std::size_t k, double alpha) {
    switch (process.kind) {
        case EfpKind::OlsCusum: return invert_pvalue(brownian_bridge_sup_pvalue, alpha);
        case EfpKind::RecCusum:
            return invert_pvalue(brownian_linear_boundary_pvalue, alpha) * (1.0 + 2.0 * process.time(k));
        default: return mosum_critical_value(process.kind, process.bandwidth, alpha);
    }
}

nlohmann::json to_json(const FluctuationProcess& p) {
    nlohmann::json j = {{"kind", to_string(p.kind)}, {"n", p.n}, {"sigma", p.sigma}, {"path", p.path}};
    if (is_mosum(p.kind)) j["bandwidth"] = p.bandwidth;
    return j;
}

nlohmann::json to_json(const ScTestResult& r) {
    return {{"statistic", r.statistic},
            {"p_value", r.p_value},
            {"p_is_table_floor", r.p_is_table_floor},
            {"reject", r.reject}};
}

}  // namespace ipseries::breaks
