#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "ipseries/core/monthly_series.hpp"

namespace ipseries::wavelet {

/// Morlet transform settings. `J < 0` means "derive from the series length".
struct WaveletParams {
    double omega0 = 6.0;
    double dt = 1.0;
    double dj = 1.0 / 12.0;
    double s0 = 2.0;
    int J = -1;
};

/// Period-to-scale ratio of the Morlet wavelet.
double fourier_factor(double omega0);

/// Resolves J for a series of length n and validates the parameters.
/// Errors: Parameter.
WaveletParams resolve(const WaveletParams& params, std::size_t n);

struct WaveletTransform {
    std::vector<double> scales;
    std::vector<double> periods;
    Eigen::MatrixXcd coefficients;  ///< (J+1) x n
    double sigma = 0.0;             ///< standard deviation used for normalisation
};

/// Continuous Morlet transform of the standardised series, computed per scale
/// in the frequency domain with zero padding to the next power of two.
/// Errors: Length (n < 8), Parameter.
WaveletTransform morlet_cwt(std::span<const double> x, const WaveletParams& params = {});
WaveletTransform morlet_cwt(const MonthlySeries& series, const WaveletParams& params = {});

/// Lag-1 autocorrelation of the demeaned series. Errors: Length (n < 3), Degenerate.
double ar1_fit(std::span<const double> x);
double ar1_fit(const MonthlySeries& series);

/// Normalised AR(1) spectrum at Fourier period `period` (same units as dt).
double ar1_spectrum(double phi, double period, double dt = 1.0);

/// Z such that P(|Wx||Wy| > (Z/2) sqrt(Px Py)) = alpha for two independent
/// red-noise transforms: the root of u K1(u) = alpha. Z(0.05) ~ 3.9999.
double chi2_product_quantile(double alpha);

/// Cross-power level exceeded with probability alpha under the AR(1)
/// backgrounds, for unit-variance inputs: (Z/2) sqrt(Px Py).
/// Errors: Parameter (|phi| >= 1, alpha outside (0,1), period <= 0).
double significance_threshold(double phi_x, double phi_y, double period, double alpha,
                              double dt = 1.0);

/// coi(t) = fourier_factor * sqrt(2) * dt * min(t + 0.5, n - t - 0.5).
std::vector<double> cone_of_influence(std::size_t n, double dt = 1.0, double omega0 = 6.0);

struct CrossWaveletSpectrum {
    MonthDate start;
    std::vector<double> scales;
    std::vector<double> periods;
    Eigen::MatrixXd power;  ///< |Wxy|, scales x time
    Eigen::MatrixXd phase;  ///< arg Wxy in (-pi, pi]
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> signif;
    std::vector<double> coi;
    double phi_x = 0.0, phi_y = 0.0;
    double alpha = 0.05;

    [[nodiscard]] std::size_t n_scales() const noexcept { return scales.size(); }
    [[nodiscard]] std::size_t n_times() const noexcept { return coi.size(); }
    /// Whether cell (j, t) lies outside the cone of influence.
    [[nodiscard]] bool reliable(std::size_t j, std::size_t t) const { return periods[j] <= coi[t]; }
};

/// Errors: Dimension (length mismatch), plus those of morlet_cwt / ar1_fit.
CrossWaveletSpectrum cross_wavelet(const MonthlySeries& x, const MonthlySeries& y,
                                   const WaveletParams& params = {}, double alpha = 0.05);
CrossWaveletSpectrum cross_wavelet(std::span<const double> x, std::span<const double> y,
                                   const WaveletParams& params = {}, double alpha = 0.05);

nlohmann::json to_json(const CrossWaveletSpectrum& s);
/// scale,time,power,phase,signif
std::string to_csv(const CrossWaveletSpectrum& s);

}  // namespace ipseries::wavelet
