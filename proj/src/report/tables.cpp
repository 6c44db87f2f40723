#include "ipseries/report/tables.hpp"

#include <cfloat>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace ipseries::report {

namespace {

using nlohmann::json;

std::string skip_note(const PipelineReport& r, std::initializer_list<std::string_view> stages) {
    for (auto name : stages) {
        for (const auto& s : r.stages) {
            if (s.name != name || s.status == StageStatus::Ok) continue;
            return fmt::format("not computed: stage '{}' {}{}{}", name, to_string(s.status),
                               s.reason.empty() ? "" : ": ", s.reason);
        }
    }
    return {};
}

std::string level_label(double alpha) { return fmt::format("{:g}%", alpha * 100.0); }

std::string period(const Segment& s) { return fmt::format("{} to {}", s.start.label(), s.end.label()); }

std::string segment_name(const Segment& s) { return s.label == 0 ? std::string("Full timeseries") : fmt::format("{}", s.label); }

Table table1(const PipelineReport& r) {
    Table t{"table1", "Descriptive statistics of Trademarks and Patents",
            {"Variable", "Minimum", "1st Quartile", "Median", "Mean", "3rd Quartile", "Maximum",
             "Standard Deviation", "Skewness", "Kurtosis"},
            {}, {}};
    for (int s = 0; s < 2; ++s) {
        if (!r.summary[s]) continue;
        const auto& x = *r.summary[s];
        t.rows.push_back({std::string(kSeriesNames[s]), fmt::format("{:.0f}", x.min), fmt::format("{:.0f}", x.q1),
                          fmt::format("{:.0f}", x.median), fmt::format("{:.0f}", x.mean), fmt::format("{:.0f}", x.q3),
                          fmt::format("{:.0f}", x.max), fmt::format("{:.3f}", x.sd), fmt::format("{:.3f}", x.skewness),
                          fmt::format("{:.2f}", x.kurtosis)});
    }
    if (auto n = skip_note(r, {"descriptives"}); !n.empty()) t.notes.push_back(n);
    if (r.spearman && r.kendall)
        t.notes.push_back(fmt::format("Rank correlation of Trademarks and Patents: Spearman {:.4f}, Kendall {:.4f}",
                                      *r.spearman, *r.kendall));
    t.notes.push_back("Kurtosis is non-excess (normal = 3); quartiles use linear interpolation of order statistics.");
    return t;
}

Table table2(const PipelineReport& r) {
    Table t{"table2", "Significance testing (p-value) for the existence of structural breakpoints in Trademarks and Patents",
            {"Variable"}, {}, {}};
    for (auto k : breaks::kAllEfpKinds) t.columns.emplace_back(breaks::to_string(k));
    for (int s = 0; s < 2; ++s) {
        if (r.efp[s].empty()) continue;
        std::vector<std::string> row{std::string(kSeriesNames[s])};
        for (const auto& e : r.efp[s])
            row.push_back(e.test.p_is_table_floor ? fmt::format("{:.2f}", e.test.p_value) : format_pvalue(e.test.p_value));
        t.rows.push_back(std::move(row));
    }
    if (auto n = skip_note(r, {"efp"}); !n.empty()) t.notes.push_back(n);
    t.notes.push_back("MOSUM p-values are interpolated from a critical-value table; 0.01 is the table floor.");
    return t;
}

std::vector<std::pair<const breaks::Break*, const breaks::Break*>> align_breaks(const breaks::BreakpointSet& a,
                                                                               const breaks::BreakpointSet& b) {
    // Merge by date; a pair shares a row when the two breaks are within two years.
    std::vector<std::pair<const breaks::Break*, const breaks::Break*>> rows;
    std::size_t i = 0, j = 0;
    while (i < a.breaks.size() || j < b.breaks.size()) {
        const breaks::Break* x = i < a.breaks.size() ? &a.breaks[i] : nullptr;
        const breaks::Break* y = j < b.breaks.size() ? &b.breaks[j] : nullptr;
        if (x && y && std::abs(distance(x->date, y->date)) <= 24) {
            rows.emplace_back(x, y);
            ++i, ++j;
        } else if (x && (!y || x->date < y->date)) {
            rows.emplace_back(x, nullptr);
            ++i;
        } else {
            rows.emplace_back(nullptr, y);
            ++j;
        }
    }
    return rows;
}

Table table3(const PipelineReport& r) {
    const double tail = (1.0 - r.config.ci_level) / 2.0;
    const auto lo = level_label(tail), hi = level_label(1.0 - tail);
    Table t{"table3", "Dating of the structural break points in Trademarks and Patents",
            {fmt::format("Trademarks {}", lo), "Trademarks Breakpoint", fmt::format("Trademarks {}", hi),
             fmt::format("Patents {}", lo), "Patents Breakpoint", fmt::format("Patents {}", hi)},
            {}, {}};
    if (r.breakpoints[0] && r.breakpoints[1]) {
        auto cells = [](const breaks::Break* b) -> std::array<std::string, 3> {
            if (b == nullptr) return {"", "", ""};
            return {b->ci_low.label(), b->date.label(), b->ci_high.label()};
        };
        for (const auto& [a, b] : align_breaks(*r.breakpoints[0], *r.breakpoints[1])) {
            auto x = cells(a), y = cells(b);
            t.rows.push_back({x[0], x[1], x[2], y[0], y[1], y[2]});
        }
        bool widened = false;
        for (const auto& bp : r.breakpoints)
            for (const auto& b : bp->breaks) widened |= b.ci_widened;
        if (widened) t.notes.push_back("Some intervals were clipped to the neighbouring regimes.");
        t.notes.push_back(fmt::format("Breaks minimise the residual sum of squares of a mean-shift model "
                                      "(minimum regime {} months); the number of breaks minimises BIC.",
                                      r.breakpoints[0]->min_segment));
    }
    if (auto n = skip_note(r, {"breakpoints"}); !n.empty()) t.notes.push_back(n);
    return t;
}

Table table4(const PipelineReport& r) {
    Table t{"table4", "Segments identified as longest length of time between Trademarks and Patents structural break points",
            {"Segment", "Period"}, {}, {}};
    if (r.segments)
        for (const auto& s : r.segments->segments) t.rows.push_back({fmt::format("{}", s.label), period(s)});
    if (auto n = skip_note(r, {"segments"}); !n.empty()) t.notes.push_back(n);
    return t;
}

std::string verdict(double stat, double crit, double level, int decimals) {
    if (level <= 0.0) return fmt::format("{:.{}f} (n.s.)", stat, decimals);
    return fmt::format("{:.{}f} v {:.{}f} ({})", stat, decimals, crit, decimals, level_label(level));
}

Table table5(const PipelineReport& r) {
    Table t{"table5", "Results of cointegration tests across full bivariate timeseries and each time-segment",
            {"Segment", "Johansen r<=1", "Johansen r=0", "Phillips-Ouliaris Pz"}, {}, {}};
    for (const auto& c : r.cointegration) {
        std::vector<std::string> row{segment_name(c.segment)};
        if (c.johansen) {
            for (std::size_t k : {1u, 0u}) {
                const double level = c.johansen->rejected_at(k);
                double crit = c.johansen->critical[k][0];
                for (std::size_t i = 0; i < integration::kCointegrationLevels.size(); ++i)
                    if (integration::kCointegrationLevels[i] == level) crit = c.johansen->critical[k][i];
                row.push_back(verdict(c.johansen->trace[k], crit, level, 2));
            }
        } else {
            row.insert(row.end(), {"", ""});
        }
        if (c.pz) {
            const double level = c.pz->rejected_at();
            row.push_back(verdict(c.pz->statistic, level == 0.01 ? c.pz->critical[1] : c.pz->critical[0], level, 4));
        } else {
            row.emplace_back("");
        }
        t.rows.push_back(std::move(row));
        if (!c.error.empty()) t.notes.push_back(fmt::format("{}: {}", segment_name(c.segment), c.error));
    }
    if (auto n = skip_note(r, {"cointegration"}); !n.empty() && r.cointegration.empty()) t.notes.push_back(n);
    t.notes.push_back("Cells read: test statistic v critical value at the smallest rejected level; n.s. = not "
                      "significant at 10% (Johansen) or 5% (Pz).");
    if (!r.cointegration.empty() && r.cointegration.front().johansen)
        t.notes.push_back(fmt::format("Johansen trace test with restricted constant, K = {}.", r.config.johansen_lags));
    return t;
}

Table table6(const PipelineReport& r) {
    Table t{"table6", "Number of differences required to bring the time-series into stationarity",
            {"Variable", "Segment", "KPSS", "ADF", "PP"}, {}, {}};
    bool capped = false;
    for (const auto& e : r.integration) {
        std::vector<std::string> row{std::string(kSeriesNames[e.series]),
                                     e.segment.label == 0 ? std::string("Full dataset") : fmt::format("{}", e.segment.label)};
        for (const auto& o : e.order) {
            if (!o) {
                row.emplace_back("");
                continue;
            }
            row.push_back(fmt::format("{}{}", o->d, o->capped ? "*" : ""));
            capped |= o->capped;
        }
        t.rows.push_back(std::move(row));
        if (!e.error.empty()) t.notes.push_back(fmt::format("{} segment {}: {}", kSeriesNames[e.series], e.segment.label, e.error));
    }
    if (capped) t.notes.push_back("* no order up to the maximum tested passed the test.");
    if (auto n = skip_note(r, {"integration_order"}); !n.empty() && r.integration.empty()) t.notes.push_back(n);
    return t;
}

std::string md_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

std::string format_pvalue(double p) {
    if (p < DBL_EPSILON) return "< 2.2e-16";
    return fmt::format("{:.4g}", p);
}

std::vector<Table> build_tables(const PipelineReport& r) {
    return {table1(r), table2(r), table3(r), table4(r), table5(r), table6(r)};
}

std::string to_markdown(const Table& t) {
    std::string out = fmt::format("**{}**\n\n", t.title);
    auto line = [&](const std::vector<std::string>& cells) {
        out += "|";
        for (const auto& c : cells) out += " " + md_escape(c) + " |";
        out += "\n";
    };
    line(t.columns);
    out += "|";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += i == 0 ? " :--- |" : " ---: |";
    out += "\n";
    for (const auto& row : t.rows) line(row);
    if (!t.notes.empty()) {
        out += "\n";
        for (const auto& n : t.notes) out += fmt::format("- {}\n", n);
    }
    return out;
}

std::string to_csv(const Table& t) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_field(cells[i]);
        }
        out += "\r\n";
    };
    line(t.columns);
    for (const auto& row : t.rows) line(row);
    return out;
}

nlohmann::json to_json(const Table& t) {
    return {{"title", t.title}, {"columns", t.columns}, {"rows", t.rows}, {"notes", t.notes}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::Io, fmt::format("cannot create '{}': {}", path.parent_path().string(), ec.message()));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", path.string()));
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, fmt::format("write to '{}' failed", path.string()));
}

std::string crlf_lines(std::string_view text) {
    std::string out;
    out.reserve(text.size() + text.size() / 16);
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n' && (i == 0 || text[i - 1] != '\r')) out += '\r';
        out += text[i];
    }
    return out;
}

std::vector<std::filesystem::path> emit_tables(const PipelineReport& report, const std::filesystem::path& dir,
                                               const std::set<Format>& formats) {
    std::vector<std::filesystem::path> written;
    const auto tables = build_tables(report);
    for (const auto& t : tables) {
        if (formats.count(Format::Markdown)) {
            write_file(dir / (t.key + ".md"), to_markdown(t));
            written.push_back(dir / (t.key + ".md"));
        }
        if (formats.count(Format::Csv)) {
            write_file(dir / (t.key + ".csv"), to_csv(t));
            written.push_back(dir / (t.key + ".csv"));
        }
    }
    if (formats.count(Format::Csv)) {
        // Per-series detail alongside the tables.
        for (int s = 0; s < 2; ++s) {
            const auto name = fmt::format("{}", kSeriesNames[s]);
            std::string lower_name = name;
            for (auto& c : lower_name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            if (report.decomposition[s]) {
                const auto p = dir / fmt::format("decomposition_{}.csv", lower_name);
                write_file(p, crlf_lines(descriptives::decomposition_csv(*report.decomposition[s])));
                written.push_back(p);
            }
            if (report.breakpoints[s]) {
                const auto p = dir / fmt::format("breakpoints_{}.csv", lower_name);
                write_file(p, crlf_lines(breaks::to_csv(*report.breakpoints[s])));
                written.push_back(p);
            }
        }
        if (report.xwt) {
            write_file(dir / "cross_wavelet.csv", crlf_lines(wavelet::to_csv(*report.xwt)));
            written.push_back(dir / "cross_wavelet.csv");
        }
    }
    if (formats.count(Format::Json)) {
        write_file(dir / "report.json", to_json(report).dump(1) + "\n");
        written.push_back(dir / "report.json");
    }
    return written;
}

}  // namespace ipseries::report
