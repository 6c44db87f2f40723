#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ipseries/core/monthly_series.hpp"

namespace ipseries::integration {

/// Significance levels of the embedded critical values: 10%, 5%, 1%.
inline constexpr std::array<double, 3> kCointegrationLevels = {0.10, 0.05, 0.01};

struct JohansenResult {
    std::vector<double> eigenvalues;              ///< descending, in [0,1)
    std::array<double, 2> trace{};                ///< index 0: r = 0, index 1: r <= 1
    std::array<std::array<double, 3>, 2> critical{};  ///< [r][level]
    std::size_t lags = 2;
    std::size_t nobs = 0;                         ///< n - K
    std::string_view ecdet = "const";

    /// Smallest tabulated level at which H0: rank <= r is rejected, or 0 if none.
    [[nodiscard]] double rejected_at(std::size_t r) const;
};

/// Johansen trace test with a restricted constant for a bivariate system.
/// Errors: Dimension (length mismatch), Parameter (K < 2), Length (n < 5K), Rank.
JohansenResult johansen_trace(std::span<const double> x, std::span<const double> y, std::size_t K = 2);
JohansenResult johansen_trace(const MonthlySeries& x, const MonthlySeries& y, std::size_t K = 2);

enum class PzDemean { None, Constant };

struct PoResult {
    double statistic = 0.0;
    std::array<double, 2> critical{};  ///< 5%, 1%
    std::size_t lags = 0;
    PzDemean demean = PzDemean::None;

    [[nodiscard]] double rejected_at() const;  ///< 0.01, 0.05 or 0 when not rejected
};

/// Phillips-Ouliaris Pz: N tr(Omega M_zz^{-1}) from the residuals of the
/// first-order vector regression z_t on z_{t-1}.
/// Errors: Dimension, Length (n < 10), Rank.
PoResult phillips_ouliaris_pz(std::span<const double> x, std::span<const double> y,
                              PzDemean demean = PzDemean::None);
PoResult phillips_ouliaris_pz(const MonthlySeries& x, const MonthlySeries& y, PzDemean demean = PzDemean::None);

nlohmann::json to_json(const JohansenResult& r);
nlohmann::json to_json(const PoResult& r);

}  // namespace ipseries::integration
