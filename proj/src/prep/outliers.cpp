#include "ipseries/prep/outliers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Core>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "ipseries/error.hpp"

namespace ipseries::prep {

namespace {

constexpr std::size_t kBurnIn = 13;
constexpr std::size_t kSeasonLag = 12;

double sum_squares(const std::vector<double>& e) {
    double s = 0.0;
    for (double v : e) s += v * v;
    return s;
}

struct CssFunctor {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    std::span<const double> w;

    int inputs() const { return 2; }
    int values() const { return static_cast<int>(w.size()); }

    int operator()(const Eigen::VectorXd& u, Eigen::VectorXd& fvec) const {
        auto e = detail::airline_residuals(w, std::tanh(u[0]), std::tanh(u[1]));
        for (std::size_t i = 0; i < e.size(); ++i) fvec[static_cast<Eigen::Index>(i)] = e[i];
        return 0;
    }
};

// Residual response to a unit intervention at `t` (pulse or step), past burn-in.
std::vector<double> pattern(std::size_t n, std::size_t t, OutlierKind kind, double theta,
                            double seasonal_theta) {
    std::vector<double> x(n, 0.0);
    if (kind == OutlierKind::Additive)
        x[t] = 1.0;
    else
        std::fill(x.begin() + static_cast<std::ptrdiff_t>(t), x.end(), 1.0);
    auto e = detail::airline_residuals(detail::seasonal_difference(x), theta, seasonal_theta);
    return {e.begin() + kBurnIn, e.end()};
}

struct Candidate {
    std::size_t index = 0;
    OutlierKind kind = OutlierKind::Additive;
    double t = 0.0;
    double effect = 0.0;
};

}  // namespace

std::string_view to_string(OutlierKind kind) noexcept {
    return kind == OutlierKind::Additive ? "AO" : "LS";
}

bool OutlierReport::flagged(std::size_t index) const noexcept {
    return std::any_of(flags.begin(), flags.end(), [&](const auto& f) { return f.index == index; });
}

namespace detail {

std::vector<double> seasonal_difference(std::span<const double> x) {
    if (x.size() <= kSeasonLag + 1) return {};
    std::vector<double> w(x.size() - kSeasonLag - 1);
    for (std::size_t k = 0; k < w.size(); ++k) {
        std::size_t t = k + kSeasonLag + 1;
        w[k] = x[t] - x[t - 1] - x[t - kSeasonLag] + x[t - kSeasonLag - 1];
    }
    return w;
}

std::vector<double> airline_residuals(std::span<const double> w, double theta,
                                      double seasonal_theta) {
    std::vector<double> e(w.size());
    for (std::size_t t = 0; t < w.size(); ++t) {
        double v = w[t];
        if (t >= 1) v += theta * e[t - 1];
        if (t >= kSeasonLag) v += seasonal_theta * e[t - kSeasonLag];
        if (t >= kSeasonLag + 1) v -= theta * seasonal_theta * e[t - kSeasonLag - 1];
        e[t] = v;
    }
    return e;
}

std::pair<double, double> fit_airline(std::span<const double> w) {
    // Coarse grid guards against the local minima of the CSS surface, then LM polishes.
    double best = std::numeric_limits<double>::infinity();
    double bt = 0.0, bs = 0.0;
    for (int i = -9; i <= 9; ++i) {
        for (int j = -9; j <= 9; ++j) {
            double th = 0.1 * i, sth = 0.1 * j;
            double s = sum_squares(airline_residuals(w, th, sth));
            if (s < best) {
                best = s;
                bt = th;
                bs = sth;
            }
        }
    }
    CssFunctor functor{w};
    Eigen::NumericalDiff<CssFunctor> numdiff(functor);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<CssFunctor>> lm(numdiff);
    lm.parameters.xtol = 1e-10;
    lm.parameters.ftol = 1e-12;
    lm.parameters.maxfev = 2000;
    Eigen::VectorXd u(2);
    u << std::atanh(bt), std::atanh(bs);
    lm.minimize(u);
    double th = std::tanh(u[0]), sth = std::tanh(u[1]);
    if (!std::isfinite(th) || !std::isfinite(sth) ||
        sum_squares(airline_residuals(w, th, sth)) > best)
        return {bt, bs};
    return {th, sth};
}

}  // namespace detail

OutlierReport detect_outliers(const MonthlySeries& series, double threshold,
                              std::size_t max_iterations) {
    const std::size_t n = series.size();
    if (n < kMinOutlierLength)
        throw Error(ErrorCode::Length, fmt::format("outlier detection needs at least {} months, got {}",
                                                   kMinOutlierLength, n));
    if (!(threshold > 0.0) || !std::isfinite(threshold))
        throw Error(ErrorCode::Parameter, fmt::format("outlier threshold must be positive, got {}", threshold));

    std::vector<double> y(series.values().begin(), series.values().end());
    double scale = 1.0;
    for (double v : y) scale = std::max(scale, std::abs(v));

    OutlierReport report;
    report.threshold = threshold;
    std::vector<Candidate> found;

    for (std::size_t iter = 0; iter <= max_iterations; ++iter) {
        auto w = detail::seasonal_difference(y);
        auto [theta, stheta] = detail::fit_airline(w);
        report.theta = theta;
        report.seasonal_theta = stheta;
        if (iter == max_iterations) break;

        auto e_all = detail::airline_residuals(w, theta, stheta);
        std::vector<double> e(e_all.begin() + kBurnIn, e_all.end());
        const double sigma = std::sqrt(sum_squares(e) / static_cast<double>(e.size()));
        if (sigma <= 1e-12 * scale) {
            if (iter == 0)
                throw Error(ErrorCode::Degenerate, "series has no variation after seasonal differencing");
            break;
        }

        Candidate best;
        for (std::size_t t = kBurnIn + 1; t + 1 < n; ++t) {
            bool near = std::any_of(found.begin(), found.end(), [&](const Candidate& c) {
                return t + 1 >= c.index && t <= c.index + 1;
            });
            if (near) continue;
            for (auto kind : {OutlierKind::Additive, OutlierKind::LevelShift}) {
                auto xi = pattern(n, t, kind, theta, stheta);
                double xx = 0.0, xe = 0.0;
                for (std::size_t k = 0; k < xi.size(); ++k) {
                    xx += xi[k] * xi[k];
                    xe += xi[k] * e[k];
                }
                if (xx < 1e-12) continue;
                double tstat = xe / std::sqrt(xx) / sigma;
                // Strict comparison keeps the earliest index and prefers AO on ties.
                if (std::abs(tstat) > std::abs(best.t)) best = {t, kind, tstat, xe / xx};
            }
        }
        if (!(std::abs(best.t) > threshold)) break;

        if (best.kind == OutlierKind::Additive)
            y[best.index] -= best.effect;
        else
            for (std::size_t t = best.index; t < n; ++t) y[t] -= best.effect;
        found.push_back(best);
    }

    std::sort(found.begin(), found.end(),
              [](const Candidate& a, const Candidate& b) { return a.index < b.index; });
    for (const auto& c : found)
        report.flags.push_back({c.index, series.date_at(c.index), series[c.index], std::abs(c.t),
                                c.kind, c.effect});
    return report;
}

MonthlySeries replace_outliers(const MonthlySeries& series, const OutlierReport& report) {
    const std::size_t n = series.size();
    std::vector<std::size_t> idx;
    for (const auto& f : report.flags) {
        if (f.index >= n)
            throw Error(ErrorCode::Bounds, fmt::format("flag index {} outside series of {}", f.index, n));
        if (f.index == 0 || f.index + 1 == n)
            throw Error(ErrorCode::UnsupportedPosition,
                        fmt::format("flag at {} has no neighbour on one side", series.date_at(f.index).iso()));
        idx.push_back(f.index);
    }
    std::sort(idx.begin(), idx.end());
    for (std::size_t k = 1; k < idx.size(); ++k) {
        if (idx[k] - idx[k - 1] <= 1)
            throw Error(ErrorCode::Ambiguity,
                        fmt::format("flags at {} and {} are adjacent", series.date_at(idx[k - 1]).iso(),
                                    series.date_at(idx[k]).iso()));
    }
    std::vector<double> out(series.values().begin(), series.values().end());
    for (auto i : idx) out[i] = (series[i - 1] + series[i + 1]) / 2.0;
    return series.with_values(std::move(out));
}

CleanedPair clean_pair(const MonthlySeries& trademarks, const MonthlySeries& patents,
                       double threshold) {
    if (trademarks.size() != patents.size() || trademarks.start() != patents.start())
        throw Error(ErrorCode::Dimension, "trademark and patent series must share their span");
    auto rt = detect_outliers(trademarks, threshold);
    auto rp = detect_outliers(patents, threshold);
    auto ct = replace_outliers(trademarks, rt);
    auto cp = replace_outliers(patents, rp);
    return {std::move(ct), std::move(cp), std::move(rt), std::move(rp)};
}

nlohmann::json to_json(const OutlierReport& report) {
    auto flags = nlohmann::json::array();
    for (const auto& f : report.flags) {
        flags.push_back({{"index", f.index},
                         {"date", f.date.iso()},
                         {"observed", f.observed},
                         {"score", f.score},
                         {"type", to_string(f.kind)},
                         {"effect", f.effect}});
    }
    return flags;
}

}  // namespace ipseries::prep
