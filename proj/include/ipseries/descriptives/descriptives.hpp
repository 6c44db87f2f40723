#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ipseries/core/monthly_series.hpp"

namespace ipseries::descriptives {

struct SummaryStats {
    double min = 0, q1 = 0, median = 0, mean = 0, q3 = 0, max = 0;
    double sd = 0;        ///< n-1 denominator
    double skewness = 0;  ///< m3 / m2^1.5
    double kurtosis = 0;  ///< m4 / m2^2 (normal = 3)
    std::size_t n = 0;
};

/// Quantile with the linear order-statistic rule: rank 1 + (n-1)p.
double quantile(std::span<const double> values, double p);

/// Errors: Length (n < 2), Degenerate (all values equal).
SummaryStats summary_stats(const MonthlySeries& series);
SummaryStats summary_stats(std::span<const double> values);

enum class RankMethod { Spearman, Kendall };

std::string_view to_string(RankMethod m) noexcept;

/// Spearman rho on mid-ranks, or Kendall tau-b.
/// Errors: Dimension (length mismatch), Length (n < 3), Degenerate (all tied).
double rank_correlation(std::span<const double> x, std::span<const double> y, RankMethod method);
double rank_correlation(const MonthlySeries& x, const MonthlySeries& y, RankMethod method);

/// Average ranks (1-based), ties receive the mean of their positions.
std::vector<double> mid_ranks(std::span<const double> values);

inline constexpr std::size_t kPeriod = 12;

struct Decomposition {
    MonthDate start;
    std::vector<double> observed;
    std::vector<std::optional<double>> trend;
    std::vector<double> seasonal;
    std::vector<std::optional<double>> remainder;
    std::vector<double> figures;  ///< seasonal effect per calendar month, Jan..Dec
    std::size_t period = kPeriod;
};

/// Classical additive decomposition with a centred 2x12 moving average.
/// Errors: Length (n < 24).
Decomposition decompose_additive(const MonthlySeries& series);

/// date,observed,trend,seasonal,remainder; empty cells where undefined.
std::string decomposition_csv(const Decomposition& d);

nlohmann::json to_json(const SummaryStats& s);
nlohmann::json to_json(const Decomposition& d);

}  // namespace ipseries::descriptives
