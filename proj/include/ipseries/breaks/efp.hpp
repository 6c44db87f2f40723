#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ipseries/core/monthly_series.hpp"

namespace ipseries::breaks {

enum class EfpKind { OlsCusum, OlsMosum, RecCusum, RecMosum };

inline constexpr EfpKind kAllEfpKinds[] = {EfpKind::OlsCusum, EfpKind::OlsMosum, EfpKind::RecCusum,
                                           EfpKind::RecMosum};

std::string_view to_string(EfpKind kind) noexcept;
bool is_mosum(EfpKind kind) noexcept;
bool is_recursive(EfpKind kind) noexcept;

/// Empirical fluctuation process of the mean-only model y_t = mu + e_t.
///
/// OLS-CUSUM has n + 1 points (k = 0..n) and starts and ends at zero.
/// Rec-CUSUM has n points built from the n - 1 recursive residuals.
/// MOSUM paths hold n - floor(n h) + 1 (OLS) or n - floor(n h) (Rec) points.
struct FluctuationProcess {
    EfpKind kind = EfpKind::OlsCusum;
    std::vector<double> path;
    double bandwidth = 0.0;  ///< h for MOSUM kinds, 0 otherwise
    std::size_t n = 0;       ///< number of observations
    double sigma = 0.0;      ///< scale used for standardisation

    /// Position of the k-th path point on [0, 1].
    [[nodiscard]] double time(std::size_t k) const;
};

inline constexpr double kDefaultBandwidth = 0.15;

/// Errors: Parameter (h outside (0,1)), Length (n < 2, or floor(n h) < 2 for MOSUM),
/// Degenerate (zero residual variance).
FluctuationProcess efp(std::span<const double> y, EfpKind kind, double h = kDefaultBandwidth);
FluctuationProcess efp(const MonthlySeries& series, EfpKind kind, double h = kDefaultBandwidth);

/// Recursive (one-step-ahead) residuals of the mean model, standardised to unit
/// variance under the null; length n - 1.
std::vector<double> recursive_residuals(std::span<const double> y);

struct ScTestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    bool p_is_table_floor = false;
    bool reject = false;  ///< p_value < alpha
};

/// Boundary-crossing test of a fluctuation process. Errors: Length (empty path).
ScTestResult sctest(const FluctuationProcess& process, double alpha = 0.05);

/// P(sup |B(t)| > x) for a Brownian bridge on [0,1].
double brownian_bridge_sup_pvalue(double x);
/// P(|W(t)| > x (1 + 2t) for some t in [0,1]) for standard Brownian motion.
double brownian_linear_boundary_pvalue(double x);

/// Critical value of the sup-MOSUM functional at bandwidth h and level alpha,
/// interpolated linearly in h over the embedded grid 0.05..0.50.
double mosum_critical_value(EfpKind kind, double h, double alpha);
/// Significance levels of the embedded MOSUM table, descending.
std::span<const double> mosum_levels() noexcept;

/// Boundary of the process at path point k for level alpha (used in plots).
double boundary(const FluctuationProcess& process, std::size_t k, double alpha);

nlohmann::json to_json(const FluctuationProcess& p);
nlohmann::json to_json(const ScTestResult& r);

}  // namespace ipseries::breaks
