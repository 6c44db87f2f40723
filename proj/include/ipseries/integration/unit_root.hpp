#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "ipseries/core/monthly_series.hpp"

namespace ipseries::integration {

enum class UnitRootTest { Kpss, Adf, Pp };

inline constexpr UnitRootTest kAllUnitRootTests[] = {UnitRootTest::Kpss, UnitRootTest::Adf, UnitRootTest::Pp};

std::string_view to_string(UnitRootTest t) noexcept;

/// `reject` refers to the null of the test that produced the result:
/// stationarity for KPSS, a unit root for ADF and PP.
struct UnitRootResult {
    UnitRootTest test = UnitRootTest::Kpss;
    double statistic = 0.0;
    double p_value = 1.0;       ///< interpolated from the critical-value table
    bool p_clamped = false;     ///< p lies at the edge of the table
    bool reject = false;        ///< at the alpha the test was run with
    std::size_t lags = 0;       ///< Bartlett truncation (KPSS, PP) or lagged differences (ADF)
    std::size_t nobs = 0;       ///< observations in the test regression
};

/// floor(4 (n/100)^(1/4)).
std::size_t bartlett_lags(std::size_t n);

/// Newey-West long-run variance with Bartlett weights 1 - j/(l+1).
double long_run_variance(std::span<const double> e, std::size_t lags);

/// Level-stationarity KPSS. Errors: Length (n < 12), Degenerate.
UnitRootResult kpss_test(std::span<const double> x, double alpha = 0.05);

/// ADF with constant; `lags` defaults to floor((n-1)^(1/3)).
/// Errors: Length (too few observations for the lag order), Degenerate.
UnitRootResult adf_test(std::span<const double> x, std::optional<std::size_t> lags = std::nullopt,
                        double alpha = 0.05);

/// Phillips-Perron Z-tau with constant. Errors: as adf_test.
UnitRootResult pp_test(std::span<const double> x, double alpha = 0.05);

/// Dickey-Fuller p-value (constant, no trend) by interpolation in sample size
/// and statistic; clamped to [0.01, 0.99].
double dickey_fuller_pvalue(double statistic, std::size_t n, bool* clamped = nullptr);

struct NdiffsOptions {
    double alpha = 0.05;
    std::size_t max_d = 2;
    /// Lagged differences in the ADF regression; nullopt selects floor((n-1)^(1/3)).
    std::optional<std::size_t> adf_lags = 1;
};

struct IntegrationOrder {
    int d = 0;
    bool capped = false;  ///< no differencing up to max_d passed the test
};

/// Smallest d such that the d-times differenced series passes `test`.
IntegrationOrder ndiffs(std::span<const double> x, UnitRootTest test, const NdiffsOptions& options = {});
IntegrationOrder ndiffs(const MonthlySeries& x, UnitRootTest test, const NdiffsOptions& options = {});

UnitRootResult run_test(std::span<const double> x, UnitRootTest test, double alpha = 0.05,
                        std::optional<std::size_t> adf_lags = std::nullopt);

nlohmann::json to_json(const UnitRootResult& r);

}  // namespace ipseries::integration
