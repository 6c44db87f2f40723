#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ipseries/report/pipeline.hpp"

namespace ipseries::report {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Closed outline(s) of one 4-connected region of true cells. Vertices are
/// cell-corner coordinates (column, row); every loop is closed (last vertex
/// connects back to the first). Holes appear as additional loops.
struct Contour {
    std::vector<std::vector<std::pair<int, int>>> loops;
    std::size_t cells = 0;
};

/// One contour per connected region, ordered by first cell in row-major order.
std::vector<Contour> mask_contours(const BoolMatrix& mask);

std::string decomposition_svg(const descriptives::Decomposition& d, std::string_view title);
std::string cross_wavelet_svg(const wavelet::CrossWaveletSpectrum& s, std::string_view title);
/// Expects the four processes of one series; draws one panel per process.
std::string efp_svg(const std::vector<EfpEntry>& entries, const MonthDate& start, double alpha,
                    std::string_view title);
/// Either break set may be null or empty.
std::string breakpoints_svg(const MonthlySeries& trademarks, const MonthlySeries& patents,
                            const breaks::BreakpointSet* tm_breaks, const breaks::BreakpointSet* pt_breaks,
                            std::string_view title);

/// fig1/fig2 decompositions, fig3 cross-wavelet, fig4 per-series EFP panels,
/// fig5 breakpoints. Figures whose inputs are missing are not written.
/// Errors: Io.
std::vector<std::filesystem::path> emit_plots(const PipelineReport& report, const std::filesystem::path& dir);

}  // namespace ipseries::report
