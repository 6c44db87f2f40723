// Simulates sup-MOSUM critical values for the mean model and prints them as
// C++ arrays. The output is checked in as src/breaks/mosum_table.inc.
//
//   mosum_tables [--n 4000] [--reps 20000] [--seed 20240501]

#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include <CLI11.hpp>

#include "ipseries/breaks/efp.hpp"
#include "ipseries/descriptives/descriptives.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Simulate MOSUM critical values"};
    std::size_t n = 4000;
    std::size_t reps = 20000;
    unsigned long seed = 20240501;
    app.add_option("--n", n, "observations per replicate");
    app.add_option("--reps", reps, "number of replicates");
    app.add_option("--seed", seed, "random seed");
    CLI11_PARSE(app, argc, argv);

    using ipseries::breaks::EfpKind;
    constexpr std::array<double, 10> hs = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50};
    constexpr std::array<double, 6> levels = {0.20, 0.15, 0.10, 0.05, 0.025, 0.01};
    constexpr std::array<EfpKind, 2> kinds = {EfpKind::OlsMosum, EfpKind::RecMosum};

    // stats[kind][h][rep]
    std::vector<std::vector<std::vector<double>>> stats(kinds.size(),
                                                        std::vector<std::vector<double>>(hs.size()));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<double> y(n);
    for (std::size_t r = 0; r < reps; ++r) {
        for (auto& v : y) v = gauss(rng);
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            for (std::size_t i = 0; i < hs.size(); ++i) {
                auto p = ipseries::breaks::efp(y, kinds[k], hs[i]);
                double m = 0.0;
                for (double v : p.path) m = std::max(m, std::abs(v));
                stats[k][i].push_back(m);
            }
        }
    }

    std::printf("// Generated by tools/mosum_tables (n = %zu, reps = %zu, seed = %lu).\n", n, reps, seed);
    std::printf("// Rows: bandwidth h; columns: significance level.\n");
    std::printf("constexpr std::array<double, 10> kMosumBandwidths = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50};\n");
    std::printf("constexpr std::array<double, 6> kMosumLevels = {0.20, 0.15, 0.10, 0.05, 0.025, 0.01};\n");
    const char* names[] = {"kOlsMosumCritical", "kRecMosumCritical"};
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        std::printf("constexpr double %s[10][6] = {\n", names[k]);
        for (std::size_t i = 0; i < hs.size(); ++i) {
            std::printf("    {");
            for (std::size_t a = 0; a < levels.size(); ++a) {
                double q = ipseries::descriptives::quantile(stats[k][i], 1.0 - levels[a]);
                std::printf("%.4f%s", q, a + 1 < levels.size() ? ", " : "");
            }
            std::printf("},\n");
        }
        std::printf("};\n");
    }
    return 0;
}
