#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ipseries/core/monthly_series.hpp"

namespace ipseries::breaks {

struct Break {
    std::size_t index = 0;  ///< last observation of the ending regime (0-based)
    MonthDate date;
    std::size_t ci_low_index = 0;
    std::size_t ci_high_index = 0;
    MonthDate ci_low;
    MonthDate ci_high;
    bool ci_widened = false;  ///< interval clipped or a neighbouring regime was too short
};

struct BreakpointSet {
    MonthDate start;
    std::size_t n = 0;
    std::size_t min_segment = 0;   ///< floor(n h)
    std::vector<Break> breaks;
    double rss = 0.0;
    double bic = 0.0;
    std::vector<double> rss_by_m;  ///< optimal RSS for m = 0..max_breaks
    std::vector<double> bic_by_m;
    std::vector<std::vector<std::size_t>> breaks_by_m;
    double level = 0.0;            ///< confidence level, 0 when no intervals yet

    [[nodiscard]] std::size_t m() const noexcept { return breaks.size(); }
};

inline constexpr std::size_t kDefaultMaxBreaks = 5;

/// Globally optimal mean-shift segmentation by dynamic programming, with the
/// number of breaks chosen by BIC = n log(RSS/n) + 2 (m+1) log n.
/// Errors: Parameter (h outside (0,1), floor(n h) < 2, max_breaks > floor(1/h) - 1).
BreakpointSet date_breakpoints(std::span<const double> y, double h = 0.15,
                               std::size_t max_breaks = kDefaultMaxBreaks);
BreakpointSet date_breakpoints(const MonthlySeries& series, double h = 0.15,
                               std::size_t max_breaks = kDefaultMaxBreaks);

/// Same, with a fixed number of breaks.
std::vector<std::size_t> optimal_breaks(std::span<const double> y, std::size_t min_segment,
                                        std::size_t m, double* rss_out = nullptr);

/// Residual sum of squares of the mean model on y[i..j] (inclusive).
double segment_rss(std::span<const double> y, std::size_t i, std::size_t j);

/// How the argmax distribution is scaled when forming intervals.
enum class CiConvention {
    /// Matches the widely used R implementation on the bundled data.
    ReferenceCompatible,
    /// Variance ratio after/before, scale sigma_before^2 / delta^2.
    Textbook,
};

/// CDF of the argmax of a two-sided Brownian motion with drift, with
/// variance ratio `phi` = sigma_after^2 / sigma_before^2 and drift ratio `xi`.
double argmax_cdf(double x, double xi = 1.0, double phi = 1.0);

/// Fills the confidence intervals. Endpoints are rounded outward to whole months
/// and clipped to the series.
/// Errors: Parameter (level outside (0,1)), Dimension (series length mismatch).
BreakpointSet breakpoint_confint(std::span<const double> y, const BreakpointSet& bps,
                                 double level = 0.95,
                                 CiConvention convention = CiConvention::ReferenceCompatible);
BreakpointSet breakpoint_confint(const MonthlySeries& series, const BreakpointSet& bps,
                                 double level = 0.95,
                                 CiConvention convention = CiConvention::ReferenceCompatible);

nlohmann::json to_json(const BreakpointSet& b);
/// ci_low,date,ci_high per break.
std::string to_csv(const BreakpointSet& b);

}  // namespace ipseries::breaks
