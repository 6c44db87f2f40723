#include "ipseries/integration/cointegration.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ipseries/error.hpp"
#include "ipseries/integration/unit_root.hpp"

namespace ipseries::integration {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;

// Trace critical values, restricted constant, two variables: [r][10%, 5%, 1%].
constexpr std::array<std::array<double, 3>, 2> kJohansenConst = {{{17.85, 19.96, 24.60}, {7.52, 9.24, 12.97}}};

// Pz critical values for two variables: [demean][5%, 1%].
constexpr std::array<std::array<double, 2>, 2> kPzCritical = {{{40.8217, 55.1911}, {55.2202, 71.9273}}};

void check_pair(std::size_t a, std::size_t b) {
    if (a != b) throw Error(ErrorCode::Dimension, fmt::format("length mismatch: {} vs {}", a, b));
}

MatrixXd residualise(const MatrixXd& A, const MatrixXd& B) {
    if (B.cols() == 0) return A;
    return A - B * B.colPivHouseholderQr().solve(A);
}

void require_full_rank(const MatrixXd& S, const char* what) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(S, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    if (!(top > 0.0) || es.eigenvalues().minCoeff() <= 1e-12 * top)
        throw Error(ErrorCode::Rank, fmt::format("{} is singular", what));
}

}  // namespace

double JohansenResult::rejected_at(std::size_t r) const {
    double level = 0.0;
    for (std::size_t i = 0; i < kCointegrationLevels.size(); ++i)
        if (trace[r] > critical[r][i]) level = kCointegrationLevels[i];
    return level;
}

double PoResult::rejected_at() const {
    if (statistic > critical[1]) return 0.01;
    if (statistic > critical[0]) return 0.05;
    return 0.0;
}

JohansenResult johansen_trace(std::span<const double> x, std::span<const double> y, std::size_t K) {
    check_pair(x.size(), y.size());
    if (K < 2) throw Error(ErrorCode::Parameter, fmt::format("lag order K must be at least 2, got {}", K));
    const std::size_t n = x.size();
    if (n < 5 * K) throw Error(ErrorCode::Length, fmt::format("Johansen test with K = {} needs at least {} observations, got {}", K, 5 * K, n));

    constexpr Index p = 2;
    const auto N = static_cast<Index>(n - K);
    auto Y = [&](std::size_t t, Index c) { return c == 0 ? x[t] : y[t]; };
    MatrixXd Z0(N, p), Z1(N, p * static_cast<Index>(K - 1)), ZK(N, p + 1);
    for (Index r = 0; r < N; ++r) {
        const std::size_t t = static_cast<std::size_t>(r) + K;
        for (Index c = 0; c < p; ++c) {
            Z0(r, c) = Y(t, c) - Y(t - 1, c);
            for (std::size_t i = 1; i < K; ++i)
                Z1(r, static_cast<Index>(i - 1) * p + c) = Y(t - i, c) - Y(t - i - 1, c);
            ZK(r, c) = Y(t - K, c);
        }
        ZK(r, p) = 1.0;
    }
    const MatrixXd R0 = residualise(Z0, Z1);
    const MatrixXd RK = residualise(ZK, Z1);
    const double dN = static_cast<double>(N);
    const MatrixXd S00 = R0.transpose() * R0 / dN;
    const MatrixXd S0K = R0.transpose() * RK / dN;
    const MatrixXd SKK = RK.transpose() * RK / dN;
    require_full_rank(S00, "S00");
    require_full_rank(SKK, "SKK");

    const MatrixXd M = S0K.transpose() * S00.ldlt().solve(S0K);
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(0.5 * (M + M.transpose()), SKK, Eigen::EigenvaluesOnly);
    if (ges.info() != Eigen::Success) throw Error(ErrorCode::Rank, "generalized eigenproblem failed");
    std::vector<double> lam(ges.eigenvalues().data(), ges.eigenvalues().data() + ges.eigenvalues().size());
    std::sort(lam.rbegin(), lam.rend());
    lam.resize(p);
    for (double& l : lam) l = std::clamp(l, 0.0, 1.0 - 1e-15);

    JohansenResult res;
    res.eigenvalues = lam;
    res.lags = K;
    res.nobs = static_cast<std::size_t>(N);
    res.critical = kJohansenConst;
    for (std::size_t r = 0; r < 2; ++r) {
        double s = 0.0;
        for (std::size_t i = r; i < lam.size(); ++i) s += std::log1p(-lam[i]);
        res.trace[r] = -dN * s;
    }
    return res;
}

JohansenResult johansen_trace(const MonthlySeries& x, const MonthlySeries& y, std::size_t K) {
    return johansen_trace(x.values(), y.values(), K);
}

PoResult phillips_ouliaris_pz(std::span<const double> x, std::span<const double> y, PzDemean demean) {
    check_pair(x.size(), y.size());
    const std::size_t n = x.size();
    if (n < 10) throw Error(ErrorCode::Length, fmt::format("Pz test needs at least 10 observations, got {}", n));

    const auto N = static_cast<Index>(n - 1);
    const Index extra = demean == PzDemean::Constant ? 1 : 0;
    MatrixXd Z(N, 2), X(N, 2 + extra);
    for (Index t = 0; t < N; ++t) {
        const auto s = static_cast<std::size_t>(t);
        Z(t, 0) = x[s + 1];
        Z(t, 1) = y[s + 1];
        X(t, 0) = x[s];
        X(t, 1) = y[s];
        if (extra) X(t, 2) = 1.0;
    }
    const MatrixXd U = residualise(Z, X);
    const double dN = static_cast<double>(N);

    PoResult res;
    res.demean = demean;
    res.lags = bartlett_lags(n);
    MatrixXd omega = U.transpose() * U / dN;
    for (std::size_t j = 1; j <= res.lags && static_cast<Index>(j) < N; ++j) {
        const auto J = static_cast<Index>(j);
        const MatrixXd G = U.bottomRows(N - J).transpose() * U.topRows(N - J) / dN;
        omega += (1.0 - static_cast<double>(j) / static_cast<double>(res.lags + 1)) * (G + G.transpose());
    }
    MatrixXd Zc = Z;
    if (demean == PzDemean::Constant) Zc.rowwise() -= Z.colwise().mean();
    const MatrixXd Mzz = Zc.transpose() * Zc / dN;
    require_full_rank(Mzz, "M_zz");
    res.statistic = dN * (omega * Mzz.ldlt().solve(MatrixXd::Identity(2, 2))).trace();
    res.critical = kPzCritical[demean == PzDemean::Constant ? 1 : 0];
    return res;
}

PoResult phillips_ouliaris_pz(const MonthlySeries& x, const MonthlySeries& y, PzDemean demean) {
    return phillips_ouliaris_pz(x.values(), y.values(), demean);
}

nlohmann::json to_json(const JohansenResult& r) {
    return {{"ecdet", r.ecdet},
            {"lags", r.lags},
            {"nobs", r.nobs},
            {"eigenvalues", r.eigenvalues},
            {"trace", {{"r0", r.trace[0]}, {"r1", r.trace[1]}}},
            {"critical",
             {{"r0", {{"10pct", r.critical[0][0]}, {"5pct", r.critical[0][1]}, {"1pct", r.critical[0][2]}}},
              {"r1", {{"10pct", r.critical[1][0]}, {"5pct", r.critical[1][1]}, {"1pct", r.critical[1][2]}}}}},
            {"rejected_at", {{"r0", r.rejected_at(0)}, {"r1", r.rejected_at(1)}}}};
}

nlohmann::json to_json(const PoResult& r) {
    return {{"statistic", r.statistic},
            {"demean", r.demean == PzDemean::Constant ? "constant" : "none"},
            {"lags", r.lags},
            {"critical", {{"5pct", r.critical[0]}, {"1pct", r.critical[1]}}},
            {"rejected_at", r.rejected_at()}};
}

}  // namespace ipseries::integration
