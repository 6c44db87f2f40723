#include "ipseries/integration/unit_root.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ipseries/error.hpp"

namespace ipseries::integration {

namespace {

// Fuller's Dickey-Fuller tau quantiles, constant without trend.
constexpr std::array<double, 6> kDfSizes = {25, 50, 100, 250, 500, 1e300};
constexpr std::array<double, 8> kDfProbs = {0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99};
constexpr double kDfTable[6][8] = {
    {-3.75, -3.33, -3.00, -2.63, -0.37, 0.00, 0.34, 0.72},
    {-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66},
    {-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63},
    {-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62},
    {-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61},
    {-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60},
};

// KPSS level-stationarity critical values; p decreases as the statistic grows.
constexpr std::array<double, 4> kKpssCritical = {0.347, 0.463, 0.574, 0.739};
constexpr std::array<double, 4> kKpssProbs = {0.10, 0.05, 0.025, 0.01};

template <std::size_t N>
double interp(double x, const std::array<double, N>& xs, const std::array<double, N>& ys, bool* clamped) {
    if (x <= xs.front()) {
        if (clamped) *clamped = true;
        return ys.front();
    }
    if (x >= xs.back()) {
        if (clamped) *clamped = true;
        return ys.back();
    }
    if (clamped) *clamped = false;
    std::size_t i = 0;
    while (x > xs[i + 1]) ++i;
    double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + w * (ys[i + 1] - ys[i]);
}

struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::VectorXd resid;
    Eigen::MatrixXd cov;
};

OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
    const auto n = X.rows(), k = X.cols();
    Eigen::MatrixXd xtx = X.transpose() * X;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
    if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-14)
        throw Error(ErrorCode::Degenerate, "singular test regression");
    OlsFit f;
    f.beta = ldlt.solve(X.transpose() * y);
    f.resid = y - X * f.beta;
    const double s2 = f.resid.squaredNorm() / static_cast<double>(n - k);
    if (!(s2 > 0.0)) throw Error(ErrorCode::Degenerate, "test regression fits exactly");
    f.cov = s2 * ldlt.solve(Eigen::MatrixXd::Identity(k, k));
    return f;
}

std::vector<double> difference(std::span<const double> x) {
    std::vector<double> d;
    if (x.size() < 2) return d;
    d.reserve(x.size() - 1);
    for (std::size_t t = 1; t < x.size(); ++t) d.push_back(x[t] - x[t - 1]);
    return d;
}

}  // namespace

std::string_view to_string(UnitRootTest t) noexcept {
    switch (t) {
        case UnitRootTest::Kpss: return "kpss";
        case UnitRootTest::Adf: return "adf";
        case UnitRootTest::Pp: return "pp";
    }
    return "?";
}

std::size_t bartlett_lags(std::size_t n) {
    return static_cast<std::size_t>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

double long_run_variance(std::span<const double> e, std::size_t lags) {
    const std::size_t n = e.size();
    double s = 0.0;
    for (double v : e) s += v * v;
    s /= static_cast<double>(n);
    for (std::size_t j = 1; j <= lags && j < n; ++j) {
        double g = 0.0;
        for (std::size_t t = j; t < n; ++t) g += e[t] * e[t - j];
        s += 2.0 * (1.0 - static_cast<double>(j) / static_cast<double>(lags + 1)) * g / static_cast<double>(n);
    }
    return s;
}

double dickey_fuller_pvalue(double statistic, std::size_t n, bool* clamped) {
    std::array<double, 8> row{};
    const double dn = static_cast<double>(n);
    for (std::size_t j = 0; j < kDfProbs.size(); ++j) {
        std::size_t i = 0;
        while (i + 2 < kDfSizes.size() && dn > kDfSizes[i + 1]) ++i;
        if (dn <= kDfSizes.front()) {
            row[j] = kDfTable[0][j];
        } else if (dn >= kDfSizes[kDfSizes.size() - 2]) {
            row[j] = kDfTable[kDfSizes.size() - 2][j];
            // Beyond n = 500 move towards the asymptotic row with 1/n weighting.
            double w = 1.0 - kDfSizes[kDfSizes.size() - 2] / dn;
            row[j] += w * (kDfTable[kDfSizes.size() - 1][j] - kDfTable[kDfSizes.size() - 2][j]);
        } else {
            double w = (dn - kDfSizes[i]) / (kDfSizes[i + 1] - kDfSizes[i]);
            row[j] = kDfTable[i][j] + w * (kDfTable[i + 1][j] - kDfTable[i][j]);
        }
    }
    return interp(statistic, row, kDfProbs, clamped);
}

UnitRootResult kpss_test(std::span<const double> x, double alpha) {
    const std::size_t n = x.size();
    if (n < 12) throw Error(ErrorCode::Length, fmt::format("KPSS needs at least 12 observations, got {}", n));
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> e(n);
    double partial = 0.0, ss = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        e[t] = x[t] - mean;
        partial += e[t];
        ss += partial * partial;
    }
    UnitRootResult r;
    r.test = UnitRootTest::Kpss;
    r.nobs = n;
    r.lags = bartlett_lags(n);
    const double lrv = long_run_variance(e, r.lags);
    if (!(lrv > 0.0)) throw Error(ErrorCode::Degenerate, "KPSS on a series with no long-run variance");
    r.statistic = ss / (static_cast<double>(n) * static_cast<double>(n)) / lrv;
    r.p_value = interp(r.statistic, kKpssCritical, kKpssProbs, &r.p_clamped);
    r.reject = r.p_value < alpha || (r.statistic >= kKpssCritical.back() && r.p_value <= alpha);
    return r;
}

UnitRootResult adf_test(std::span<const double> x, std::optional<std::size_t> lags, double alpha) {
    const std::size_t n = x.size();
    const std::size_t k =
        lags.value_or(n >= 2 ? static_cast<std::size_t>(std::floor(std::cbrt(static_cast<double>(n - 1)))) : 0);
    auto dx = difference(x);
    if (dx.size() < k + 4)
        throw Error(ErrorCode::Length, fmt::format("ADF with {} lags needs more than {} observations", k, n));
    const auto rows = static_cast<Eigen::Index>(dx.size() - k);
    const auto cols = static_cast<Eigen::Index>(2 + k);
    Eigen::VectorXd y(rows);
    Eigen::MatrixXd X(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t t = static_cast<std::size_t>(r) + k;  // index into dx
        y[r] = dx[t];
        X(r, 0) = 1.0;
        X(r, 1) = x[t];
        for (std::size_t i = 1; i <= k; ++i) X(r, static_cast<Eigen::Index>(1 + i)) = dx[t - i];
    }
    auto fit = ols(y, X);
    UnitRootResult res;
    res.test = UnitRootTest::Adf;
    res.lags = k;
    res.nobs = static_cast<std::size_t>(rows);
    res.statistic = fit.beta[1] / std::sqrt(fit.cov(1, 1));
    res.p_value = dickey_fuller_pvalue(res.statistic, res.nobs, &res.p_clamped);
    res.reject = res.p_value < alpha;
    return res;
}

UnitRootResult pp_test(std::span<const double> x, double alpha) {
    const std::size_t n = x.size();
    if (n < 6) throw Error(ErrorCode::Length, fmt::format("PP test needs at least 6 observations, got {}", n));
    const auto N = static_cast<Eigen::Index>(n - 1);
    Eigen::VectorXd y(N);
    Eigen::MatrixXd X(N, 2);
    for (Eigen::Index t = 0; t < N; ++t) {
        y[t] = x[static_cast<std::size_t>(t) + 1];
        X(t, 0) = 1.0;
        X(t, 1) = x[static_cast<std::size_t>(t)];
    }
    auto fit = ols(y, X);
    const double dN = static_cast<double>(N);
    const double se = std::sqrt(fit.cov(1, 1));
    const double tau = (fit.beta[1] - 1.0) / se;
    std::vector<double> e(fit.resid.data(), fit.resid.data() + N);
    const double g0 = fit.resid.squaredNorm() / dN;
    const double s = std::sqrt(fit.resid.squaredNorm() / (dN - 2.0));

    UnitRootResult r;
    r.test = UnitRootTest::Pp;
    r.nobs = static_cast<std::size_t>(N);
    r.lags = bartlett_lags(r.nobs);
    const double lam2 = long_run_variance(e, r.lags);
    if (!(lam2 > 0.0)) throw Error(ErrorCode::Degenerate, "PP test with zero long-run variance");
    const double lam = std::sqrt(lam2);
    r.statistic = std::sqrt(g0 / lam2) * tau - (lam2 - g0) / (2.0 * lam) * dN * se / s;
    r.p_value = dickey_fuller_pvalue(r.statistic, r.nobs, &r.p_clamped);
    r.reject = r.p_value < alpha;
    return r;
}

UnitRootResult run_test(std::span<const double> x, UnitRootTest test, double alpha,
                        std::optional<std::size_t> adf_lags) {
    switch (test) {
        case UnitRootTest::Kpss: return kpss_test(x, alpha);
        case UnitRootTest::Adf: return adf_test(x, adf_lags, alpha);
        case UnitRootTest::Pp: return pp_test(x, alpha);
    }
    throw Error(ErrorCode::Parameter, "unknown unit-root test");
}

IntegrationOrder ndiffs(std::span<const double> x, UnitRootTest test, const NdiffsOptions& options) {
    if (!(options.alpha > 0.0 && options.alpha < 0.5))
        throw Error(ErrorCode::Parameter, fmt::format("alpha must lie in (0, 0.5), got {}", options.alpha));
    std::vector<double> cur(x.begin(), x.end());
    for (std::size_t d = 0; d <= options.max_d; ++d) {
        auto r = run_test(cur, test, options.alpha, options.adf_lags);
        const bool stationary = test == UnitRootTest::Kpss ? !r.reject : r.reject;
        if (stationary) return {static_cast<int>(d), false};
        if (d < options.max_d) cur = difference(cur);
    }
    return {static_cast<int>(options.max_d), true};
}

IntegrationOrder ndiffs(const MonthlySeries& x, UnitRootTest test, const NdiffsOptions& options) {
    return ndiffs(x.values(), test, options);
}

nlohmann::json to_json(const UnitRootResult& r) {
    return {{"test", to_string(r.test)}, {"statistic", r.statistic}, {"p_value", r.p_value},
            {"p_clamped", r.p_clamped},  {"reject", r.reject},       {"lags", r.lags},
            {"nobs", r.nobs}};
}

}  // namespace ipseries::integration
