// ipseries command-line front end.
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>
#include <fmt/color.h>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ipseries/report/pipeline.hpp"
#include "ipseries/report/plots.hpp"
#include "ipseries/report/tables.hpp"

namespace {

using namespace ipseries;
using namespace ipseries::report;

constexpr int kExitOk = 0;
constexpr int kExitStageFailure = 1;
constexpr int kExitUsage = 2;

bool use_color() {
    if (std::getenv("IPSERIES_NO_COLOR") != nullptr || std::getenv("NO_COLOR") != nullptr) return false;
    return isatty(fileno(stdout)) != 0;
}

std::string styled(std::string_view text, fmt::text_style style) {
    if (!use_color()) return std::string(text);
    return fmt::format(style, "{}", text);
}

std::string status_label(StageStatus s) {
    switch (s) {
        case StageStatus::Ok: return styled("ok", fmt::fg(fmt::terminal_color::green));
        case StageStatus::Failed: return styled("FAILED", fmt::fg(fmt::terminal_color::red) | fmt::emphasis::bold);
        case StageStatus::Skipped: return styled("skipped", fmt::fg(fmt::terminal_color::yellow));
    }
    return "?";
}

struct Options {
    PipelineConfig config;
    std::string formats = "json,md,csv,svg";
    bool json_output = false;
};

void add_common(CLI::App& cmd, Options& o) {
    cmd.add_option("--input,-i", o.config.input, "Monthly filing-count CSV")->required()->check(CLI::ExistingFile);
    cmd.add_option("--truncate", o.config.truncate_to, "Number of leading months analysed")->capture_default_str();
    cmd.add_option("--outlier-threshold", o.config.outlier_threshold, "Outlier t-statistic threshold")->capture_default_str();
    cmd.add_option("--alpha", o.config.alpha, "Significance level")->capture_default_str();
    cmd.add_option("--h", o.config.efp_bandwidth, "Bandwidth / minimum regime fraction")->capture_default_str();
    cmd.add_option("--lags", o.config.johansen_lags, "Johansen VAR lag order K")->capture_default_str();
    cmd.add_option("--max-breaks", o.config.max_breaks, "Largest number of breaks considered")->capture_default_str();
}

// Stage list on stderr for the per-stage commands, stdout for analyze.
void print_stages(std::FILE* out, const PipelineReport& r) {
    for (const auto& s : r.stages) {
        fmt::print(out, "  {:<18} {}", s.name, status_label(s.status));
        if (!s.reason.empty()) fmt::print(out, "  {}", s.reason);
        fmt::print(out, "\n");
    }
}

int exit_code(const PipelineReport& r) {
    for (auto name : {"ingest", "truncate"})
        if (r.stage(name).status == StageStatus::Failed) return kExitUsage;
    return r.any_failed() ? kExitStageFailure : kExitOk;
}

int print_tables(const PipelineReport& r, std::initializer_list<std::string_view> keys, bool as_json) {
    const auto tables = build_tables(r);
    nlohmann::json j = nlohmann::json::object();
    bool first = true;
    for (const auto& t : tables) {
        bool want = false;
        for (auto k : keys) want |= t.key == k;
        if (!want) continue;
        if (as_json) {
            j[t.key] = to_json(t);
        } else {
            if (!first) fmt::print("\n");
            fmt::print("{}", to_markdown(t));
            first = false;
        }
    }
    if (as_json) fmt::print("{}\n", j.dump(2));
    if (r.any_failed() || r.stage("ingest").status != StageStatus::Ok) print_stages(stderr, r);
    return exit_code(r);
}

int run_analyze(const Options& o) {
    const auto report = run_pipeline(o.config);
    fmt::print("{} {} ({} rows, sha256 {})\n", styled("ipseries analyze", fmt::emphasis::bold),
               o.config.input.string(), report.rows_read, report.data_sha256.substr(0, 12));
    print_stages(stdout, report);
    try {
        std::size_t files = emit_tables(report, o.config.output_dir, o.config.formats).size();
        if (o.config.formats.count(Format::Svg)) files += emit_plots(report, o.config.output_dir).size();
        fmt::print("wrote {} files to {}\n", files, o.config.output_dir.string());
    } catch (const Error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitStageFailure;
    }
    return exit_code(report);
}

int run_wavelet(const Options& o) {
    const auto r = run_pipeline(o.config);
    if (!r.xwt) {
        print_stages(stderr, r);
        return exit_code(r) == kExitOk ? kExitStageFailure : exit_code(r);
    }
    const auto& s = *r.xwt;
    std::size_t inside = 0, signif = 0;
    for (std::size_t j = 0; j < s.n_scales(); ++j)
        for (std::size_t t = 0; t < s.n_times(); ++t)
            if (s.reliable(j, t)) {
                ++inside;
                signif += s.signif(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t)) ? 1 : 0;
            }
    const auto contours = mask_contours(s.signif);
    if (o.json_output) {
        nlohmann::json j = {{"scales", s.n_scales()},
                            {"times", s.n_times()},
                            {"period_min", s.periods.front()},
                            {"period_max", s.periods.back()},
                            {"phi_x", s.phi_x},
                            {"phi_y", s.phi_y},
                            {"alpha", s.alpha},
                            {"cells_inside_coi", inside},
                            {"significant_inside_coi", signif},
                            {"significant_regions", contours.size()}};
        fmt::print("{}\n", j.dump(2));
    } else {
        fmt::print("Cross-wavelet spectrum: {} scales (periods {:.2f}-{:.1f} months) x {} months\n", s.n_scales(),
                   s.periods.front(), s.periods.back(), s.n_times());
        fmt::print("AR(1) coefficients: Trademarks {:.4f}, Patents {:.4f}\n", s.phi_x, s.phi_y);
        fmt::print("Significant at {:g}%: {} of {} cells inside the cone of influence; {} connected regions\n",
                   100 * s.alpha, signif, inside, contours.size());
    }
    if (!o.config.output_dir.empty()) {
        write_file(o.config.output_dir / "cross_wavelet.csv", crlf_lines(wavelet::to_csv(s)));
        write_file(o.config.output_dir / "fig3_cross_wavelet.svg",
                   cross_wavelet_svg(s, "Cross-wavelet power of Trademarks and Patents"));
    }
    return exit_code(r);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bivariate analysis of monthly trademark and patent filing counts", "ipseries"};
    app.set_version_flag("--version", IPSERIES_VERSION);
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print this help message and exit");  // --h is the bandwidth

    Options o;
    auto* analyze = app.add_subcommand("analyze", "Run the full pipeline and write tables and figures");
    add_common(*analyze, o);
    analyze->add_option("--out,-o", o.config.output_dir, "Output directory")->required();
    analyze->add_option("--formats", o.formats, "Comma-separated subset of json,md,csv,svg")->capture_default_str();

    auto* stats = app.add_subcommand("stats", "Descriptive statistics and rank correlations (Table 1)");
    auto* brk = app.add_subcommand("breaks", "Fluctuation tests, break dates and segments (Tables 2-4)");
    auto* coint = app.add_subcommand("coint", "Cointegration tests per segment (Table 5)");
    auto* ndiffs = app.add_subcommand("ndiffs", "Integration orders per segment (Table 6)");
    auto* wav = app.add_subcommand("wavelet", "Cross-wavelet spectrum summary");
    for (auto* cmd : {stats, brk, coint, ndiffs, wav}) {
        add_common(*cmd, o);
        cmd->add_flag("--json", o.json_output, "Print JSON instead of Markdown");
    }
    wav->add_option("--out,-o", o.config.output_dir, "Also write the spectrum CSV and figure here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        o.config.formats = parse_formats(o.formats);
        validate(o.config);
        if (analyze->parsed()) return run_analyze(o);
        if (wav->parsed()) return run_wavelet(o);
        const auto report = run_pipeline(o.config);
        if (stats->parsed()) return print_tables(report, {"table1"}, o.json_output);
        if (brk->parsed()) return print_tables(report, {"table2", "table3", "table4"}, o.json_output);
        if (coint->parsed()) return print_tables(report, {"table5"}, o.json_output);
        if (ndiffs->parsed()) return print_tables(report, {"table6"}, o.json_output);
    } catch (const Error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return e.code() == ErrorCode::Parameter ? kExitUsage : kExitStageFailure;
    }
    return kExitUsage;
}
