#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ipseries/core/monthly_series.hpp"

namespace ipseries::prep {

/// Intervention shape that best explains a flagged month.
enum class OutlierKind { Additive, LevelShift };

std::string_view to_string(OutlierKind kind) noexcept;

struct OutlierFlag {
    std::size_t index = 0;
    MonthDate date;
    double observed = 0.0;
    double score = 0.0;   ///< |t| of the intervention estimate
    OutlierKind kind = OutlierKind::Additive;
    double effect = 0.0;  ///< estimated intervention size, in counts
};

struct OutlierReport {
    std::vector<OutlierFlag> flags;  ///< sorted by index
    double threshold = 0.0;
    double theta = 0.0;           ///< regular MA(1) coefficient of the final fit
    double seasonal_theta = 0.0;  ///< seasonal MA(1) coefficient of the final fit

    [[nodiscard]] bool flagged(std::size_t index) const noexcept;
};

inline constexpr double kDefaultOutlierThreshold = 4.0;
/// Three seasonal cycles plus one month; shorter series leave too few
/// residuals after seasonal differencing and filter burn-in.
inline constexpr std::size_t kMinOutlierLength = 37;

/// Iterative intervention search on an ARIMA(0,1,1)(0,1,1)_12 model.
///
/// Each round refits the two MA coefficients by conditional least squares,
/// scores an additive outlier and a level shift at every admissible month
/// (t-ratio of the intervention estimate against the residual RMS), removes
/// the strongest one if |t| > threshold and repeats. Months within one of an
/// existing flag, the first 14 months and the last month are never flagged.
///
/// Errors: Length (n < kMinOutlierLength), Parameter (threshold <= 0),
/// Degenerate (series with no residual variation after differencing).
OutlierReport detect_outliers(const MonthlySeries& series,
                              double threshold = kDefaultOutlierThreshold,
                              std::size_t max_iterations = 20);

/// Replaces each flagged value by the mean of its two neighbours, taken
/// from the unmodified input.
///
/// Errors: UnsupportedPosition (flag at either end), Ambiguity (adjacent
/// flags), Bounds (flag outside the series).
MonthlySeries replace_outliers(const MonthlySeries& series, const OutlierReport& report);

struct CleanedPair {
    MonthlySeries trademarks;
    MonthlySeries patents;
    OutlierReport trademark_report;
    OutlierReport patent_report;
};

CleanedPair clean_pair(const MonthlySeries& trademarks, const MonthlySeries& patents,
                       double threshold = kDefaultOutlierThreshold);

nlohmann::json to_json(const OutlierReport& report);

namespace detail {

/// w_t = x_t - x_{t-1} - x_{t-12} + x_{t-13}; length n - 13, w[k] aligns with x[k + 13].
std::vector<double> seasonal_difference(std::span<const double> x);

/// Inverse MA filter of the airline model with zero initial state.
std::vector<double> airline_residuals(std::span<const double> w, double theta,
                                      double seasonal_theta);

/// Conditional-sum-of-squares estimate of (theta, seasonal_theta), both in (-1, 1).
std::pair<double, double> fit_airline(std::span<const double> w);

}  // namespace detail

}  // namespace ipseries::prep
