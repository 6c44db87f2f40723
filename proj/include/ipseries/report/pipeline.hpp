#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ipseries/breaks/breakpoints.hpp"
#include "ipseries/breaks/efp.hpp"
#include "ipseries/breaks/segments.hpp"
#include "ipseries/core/csv.hpp"
#include "ipseries/descriptives/descriptives.hpp"
#include "ipseries/error.hpp"
#include "ipseries/integration/cointegration.hpp"
#include "ipseries/integration/unit_root.hpp"
#include "ipseries/prep/outliers.hpp"
#include "ipseries/wavelet/wavelet.hpp"

namespace ipseries::report {

enum class Format { Json, Markdown, Csv, Svg };

std::string_view to_string(Format f) noexcept;
/// Parses a comma-separated list such as "json,md,csv,svg". Errors: Parameter.
std::set<Format> parse_formats(std::string_view list);

struct PipelineConfig {
    std::filesystem::path input;
    std::filesystem::path output_dir;
    std::set<Format> formats = {Format::Json, Format::Markdown, Format::Csv, Format::Svg};
    std::size_t truncate_to = 472;
    double outlier_threshold = prep::kDefaultOutlierThreshold;
    double efp_bandwidth = breaks::kDefaultBandwidth;
    double alpha = 0.05;
    std::size_t johansen_lags = 2;
    std::size_t max_breaks = breaks::kDefaultMaxBreaks;
    double ci_level = 0.95;
    breaks::CiConvention ci_convention = breaks::CiConvention::ReferenceCompatible;
    /// Lagged differences in the ADF regressions used for integration orders.
    std::optional<std::size_t> adf_lags = 1;
    integration::PzDemean pz_demean = integration::PzDemean::None;
};

/// Errors: Parameter (alpha outside (0, 0.5), h outside (0,1), K < 2, ...).
void validate(const PipelineConfig& config);

enum class StageStatus { Ok, Failed, Skipped };

std::string_view to_string(StageStatus s) noexcept;

struct StageRecord {
    std::string name;
    StageStatus status = StageStatus::Skipped;
    std::string reason;  ///< empty when Ok
    std::optional<ErrorCode> error;
};

/// Stage names in execution order.
inline constexpr std::array<std::string_view, 12> kStages = {
    "ingest",      "truncate",    "outliers",       "descriptives", "decomposition", "correlation",
    "wavelet",     "efp",         "breakpoints",    "segments",     "cointegration", "integration_order"};

inline constexpr std::array<std::string_view, 2> kSeriesNames = {"Trademarks", "Patents"};

/// Shortest regime, in months, the pipeline accepts for break dating.
inline constexpr std::size_t kMinRegimeMonths = 12;

struct EfpEntry {
    breaks::FluctuationProcess process;
    breaks::ScTestResult test;
};

struct CointegrationEntry {
    Segment segment;  ///< label 0 = full series
    std::optional<integration::JohansenResult> johansen;
    std::optional<integration::PoResult> pz;
    std::string error;
};

struct IntegrationEntry {
    Segment segment;
    std::size_t series = 0;  ///< index into kSeriesNames
    std::array<std::optional<integration::IntegrationOrder>, 3> order;  ///< KPSS, ADF, PP
    std::string error;
};

struct PipelineReport {
    PipelineConfig config;
    std::string version;
    std::string data_sha256;
    std::size_t rows_read = 0;
    std::vector<StageRecord> stages;

    std::optional<MonthlySeries> raw[2];
    std::optional<MonthlySeries> cleaned[2];
    std::optional<prep::OutlierReport> outliers[2];
    std::optional<descriptives::SummaryStats> summary[2];
    std::optional<descriptives::Decomposition> decomposition[2];
    std::optional<double> spearman, kendall;
    std::optional<wavelet::CrossWaveletSpectrum> xwt;
    std::vector<EfpEntry> efp[2];  ///< in breaks::kAllEfpKinds order
    std::optional<breaks::BreakpointSet> breakpoints[2];
    std::optional<breaks::SegmentSet> segments;
    std::vector<CointegrationEntry> cointegration;
    std::vector<IntegrationEntry> integration;

    [[nodiscard]] const StageRecord& stage(std::string_view name) const;
    [[nodiscard]] bool any_failed() const noexcept;
};

/// Runs every stage in order. Never throws for data problems: failures are
/// recorded per stage and dependent stages are marked skipped.
/// Errors: Parameter (invalid configuration).
PipelineReport run_pipeline(const PipelineConfig& config);

/// Same, on CSV bytes already in memory.
PipelineReport run_pipeline(const PipelineConfig& config, std::string_view csv_bytes);

std::string sha256_hex(std::string_view bytes);

/// Complete structured report including all tables; deterministic.
nlohmann::json to_json(const PipelineReport& report);

}  // namespace ipseries::report
