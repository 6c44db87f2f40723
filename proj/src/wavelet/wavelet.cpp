#include "ipseries/wavelet/wavelet.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <fftw3.h>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ipseries/error.hpp"

namespace ipseries::wavelet {

namespace {

using cplx = std::complex<double>;

// RAII holder for an fftw buffer and the plans that use it.
class FftBuffer {
public:
    explicit FftBuffer(std::size_t n)
        : n_(n), data_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
        if (!data_) throw std::bad_alloc();
        auto len = static_cast<int>(n);
        forward_ = fftw_plan_dft_1d(len, data_, data_, FFTW_FORWARD, FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_1d(len, data_, data_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftBuffer() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
        fftw_free(data_);
    }
    FftBuffer(const FftBuffer&) = delete;
    FftBuffer& operator=(const FftBuffer&) = delete;

    cplx* data() { return reinterpret_cast<cplx*>(data_); }
    void forward() { fftw_execute(forward_); }
    void backward() { fftw_execute(backward_); }

private:
    std::size_t n_;
    fftw_complex* data_;
    fftw_plan forward_{};
    fftw_plan backward_{};
};

// Zero-pad to the power of two above the one nearest n, so that even the
// widest wavelets do not wrap around the circular transform.
std::size_t padded_length(std::size_t n) {
    const int base2 = static_cast<int>(std::floor(std::log2(static_cast<double>(n)) + 0.4999));
    return std::size_t{1} << (base2 + 1);
}

}  // namespace

double fourier_factor(double omega0) {
    return 4.0 * std::numbers::pi / (omega0 + std::sqrt(2.0 + omega0 * omega0));
}

WaveletParams resolve(const WaveletParams& params, std::size_t n) {
    WaveletParams p = params;
    if (!(p.omega0 >= 5.0)) throw Error(ErrorCode::Parameter, fmt::format("omega0 must be >= 5, got {}", p.omega0));
    if (!(p.dt > 0.0)) throw Error(ErrorCode::Parameter, "dt must be positive");
    if (!(p.dj > 0.0)) throw Error(ErrorCode::Parameter, "dj must be positive");
    if (!(p.s0 > 0.0)) throw Error(ErrorCode::Parameter, "s0 must be positive");
    if (p.J < 0) {
        double span = static_cast<double>(n) * p.dt / p.s0;
        p.J = span > 1.0 ? static_cast<int>(std::floor(std::log2(span) / p.dj + 1e-9)) : 0;
    }
    if (p.J < 1) throw Error(ErrorCode::Parameter, fmt::format("need at least one octave of scales (J = {})", p.J));
    return p;
}

WaveletTransform morlet_cwt(std::span<const double> x, const WaveletParams& params) {
    const std::size_t n = x.size();
    if (n < 8) throw Error(ErrorCode::Length, fmt::format("wavelet transform needs at least 8 points, got {}", n));
    const auto p = resolve(params, n);

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);

    WaveletTransform out;
    out.sigma = std::sqrt(var);
    const std::size_t J1 = static_cast<std::size_t>(p.J) + 1;
    out.scales.resize(J1);
    out.periods.resize(J1);
    const double ff = fourier_factor(p.omega0);
    for (std::size_t j = 0; j < J1; ++j) {
        out.scales[j] = p.s0 * std::exp2(static_cast<double>(j) * p.dj);
        out.periods[j] = ff * out.scales[j];
    }
    out.coefficients = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(J1), static_cast<Eigen::Index>(n));
    if (out.sigma <= 0.0) return out;

    const std::size_t N = padded_length(n);
    FftBuffer spectrum(N);
    for (std::size_t t = 0; t < N; ++t) spectrum.data()[t] = t < n ? (x[t] - mean) / out.sigma : 0.0;
    spectrum.forward();
    std::vector<cplx> xhat(spectrum.data(), spectrum.data() + N);

    std::vector<double> omega(N);
    const double dw = 2.0 * std::numbers::pi / (static_cast<double>(N) * p.dt);
    for (std::size_t k = 0; k < N; ++k)
        omega[k] = k <= N / 2 ? static_cast<double>(k) * dw : -static_cast<double>(N - k) * dw;

    FftBuffer work(N);
    const double pi_quarter = std::pow(std::numbers::pi, -0.25);
    for (std::size_t j = 0; j < J1; ++j) {
        const double s = out.scales[j];
        const double norm = std::sqrt(s * dw) * pi_quarter * std::sqrt(static_cast<double>(N));
        cplx* buf = work.data();
        for (std::size_t k = 0; k < N; ++k) {
            if (omega[k] > 0.0) {
                double a = s * omega[k] - p.omega0;
                buf[k] = xhat[k] * (norm * std::exp(-0.5 * a * a));
            } else {
                buf[k] = 0.0;
            }
        }
        work.backward();
        for (std::size_t t = 0; t < n; ++t)
            out.coefficients(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t)) =
                buf[t] / static_cast<double>(N);
    }
    return out;
}

WaveletTransform morlet_cwt(const MonthlySeries& series, const WaveletParams& params) {
    return morlet_cwt(series.values(), params);
}

double ar1_fit(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 3) throw Error(ErrorCode::Length, "AR(1) fit needs at least 3 points");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double c0 = 0.0, c1 = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        c0 += (x[t] - mean) * (x[t] - mean);
        if (t + 1 < n) c1 += (x[t] - mean) * (x[t + 1] - mean);
    }
    if (c0 <= 0.0) throw Error(ErrorCode::Degenerate, "AR(1) fit of a constant series");
    return c1 / c0;
}

double ar1_fit(const MonthlySeries& series) { return ar1_fit(series.values()); }

double ar1_spectrum(double phi, double period, double dt) {
    double c = std::cos(2.0 * std::numbers::pi * dt / period);
    return (1.0 - phi * phi) / (1.0 + phi * phi - 2.0 * phi * c);
}

double chi2_product_quantile(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error(ErrorCode::Parameter, fmt::format("alpha must lie in (0,1), got {}", alpha));
    // u K1(u) falls monotonically from 1 (u -> 0) to 0; bisect on it.
    auto f = [](double u) { return u * std::cyl_bessel_k(1.0, u); };
    double lo = 1e-12, hi = 1.0;
    while (f(hi) > alpha) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
        double mid = 0.5 * (lo + hi);
        (f(mid) > alpha ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double significance_threshold(double phi_x, double phi_y, double period, double alpha, double dt) {
    if (!(std::abs(phi_x) < 1.0) || !(std::abs(phi_y) < 1.0))
        throw Error(ErrorCode::Parameter, fmt::format("AR(1) coefficients must satisfy |phi| < 1 (got {}, {})", phi_x, phi_y));
    if (!(period > 0.0)) throw Error(ErrorCode::Parameter, "period must be positive");
    const double z = chi2_product_quantile(alpha);
    return 0.5 * z * std::sqrt(ar1_spectrum(phi_x, period, dt) * ar1_spectrum(phi_y, period, dt));
}

std::vector<double> cone_of_influence(std::size_t n, double dt, double omega0) {
    const double c = fourier_factor(omega0) * std::numbers::sqrt2 * dt;
    std::vector<double> coi(n);
    for (std::size_t t = 0; t < n; ++t) {
        double a = static_cast<double>(t) + 0.5;
        double b = static_cast<double>(n - t) - 0.5;
        coi[t] = c * std::min(a, b);
    }
    return coi;
}

CrossWaveletSpectrum cross_wavelet(std::span<const double> x, std::span<const double> y,
                                   const WaveletParams& params, double alpha) {
    if (x.size() != y.size())
        throw Error(ErrorCode::Dimension, fmt::format("length mismatch: {} vs {}", x.size(), y.size()));
    const auto p = resolve(params, x.size());
    auto wx = morlet_cwt(x, p);
    auto wy = morlet_cwt(y, p);

    CrossWaveletSpectrum s;
    s.alpha = alpha;
    s.phi_x = ar1_fit(x);
    s.phi_y = ar1_fit(y);
    s.scales = wx.scales;
    s.periods = wx.periods;
    s.coi = cone_of_influence(x.size(), p.dt, p.omega0);

    const auto rows = wx.coefficients.rows(), cols = wx.coefficients.cols();
    s.power.resize(rows, cols);
    s.phase.resize(rows, cols);
    s.signif.resize(rows, cols);
    for (Eigen::Index j = 0; j < rows; ++j) {
        const double thr = significance_threshold(s.phi_x, s.phi_y, s.periods[static_cast<std::size_t>(j)], alpha, p.dt);
        for (Eigen::Index t = 0; t < cols; ++t) {
            cplx w = wx.coefficients(j, t) * std::conj(wy.coefficients(j, t));
            s.power(j, t) = std::abs(w);
            double ph = std::arg(w);
            s.phase(j, t) = ph == -std::numbers::pi ? std::numbers::pi : ph;
            s.signif(j, t) = s.power(j, t) > thr;
        }
    }
    return s;
}

CrossWaveletSpectrum cross_wavelet(const MonthlySeries& x, const MonthlySeries& y,
                                   const WaveletParams& params, double alpha) {
    if (x.start() != y.start() && x.size() == y.size())
        throw Error(ErrorCode::Dimension, "series must share the same calendar span");
    auto s = cross_wavelet(x.values(), y.values(), params, alpha);
    s.start = x.start();
    return s;
}

nlohmann::json to_json(const CrossWaveletSpectrum& s) {
    auto power = nlohmann::json::array(), phase = nlohmann::json::array(), signif = nlohmann::json::array();
    for (Eigen::Index j = 0; j < s.power.rows(); ++j) {
        std::vector<double> pr(static_cast<std::size_t>(s.power.cols())), ph(pr.size());
        std::vector<int> sg(pr.size());
        for (Eigen::Index t = 0; t < s.power.cols(); ++t) {
            auto k = static_cast<std::size_t>(t);
            pr[k] = s.power(j, t);
            ph[k] = s.phase(j, t);
            sg[k] = s.signif(j, t) ? 1 : 0;
        }
        power.push_back(pr);
        phase.push_back(ph);
        signif.push_back(sg);
    }
    return {{"start", s.start.iso()}, {"alpha", s.alpha}, {"ar1", {s.phi_x, s.phi_y}},
            {"scales", s.scales},     {"periods", s.periods}, {"coi", s.coi},
            {"power", power},         {"phase", phase},       {"signif", signif}};
}

std::string to_csv(const CrossWaveletSpectrum& s) {
    std::string out = "scale,time,power,phase,signif\n";
    for (Eigen::Index j = 0; j < s.power.rows(); ++j)
        for (Eigen::Index t = 0; t < s.power.cols(); ++t)
            out += fmt::format("{},{},{},{},{}\n", s.scales[static_cast<std::size_t>(j)], t, s.power(j, t),
                               s.phase(j, t), s.signif(j, t) ? 1 : 0);
    return out;
}

}  // namespace ipseries::wavelet
