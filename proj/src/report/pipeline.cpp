#include "ipseries/report/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <cmath>
#include <functional>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>
#include <nlohmann/json.hpp>

#include "ipseries/report/tables.hpp"

#ifndef IPSERIES_VERSION
#define IPSERIES_VERSION "0.0.0"
#endif

namespace ipseries::report {

namespace {

using nlohmann::json;

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

// Runs stages in order and tracks which ones produced usable output.
class StageRunner {
public:
    explicit StageRunner(std::vector<StageRecord>& records) : records_(records) {}

    // `deps` must all be Ok; otherwise the stage is skipped and names the
    // first unavailable dependency.
    void operator()(std::string_view name, std::initializer_list<std::string_view> deps,
             const std::function<void(StageRecord&)>& body) {
        StageRecord rec;
        rec.name = std::string(name);
        for (auto d : deps) {
            const StageRecord* dep = find(d);
            if (dep == nullptr || dep->status != StageStatus::Ok) {
                rec.status = StageStatus::Skipped;
                if (dep == nullptr)
                    rec.reason = fmt::format("dependency '{}' did not run", d);
                else if (dep->status == StageStatus::Failed)
                    rec.reason = fmt::format("dependency '{}' failed", d);
                else
                    rec.reason = fmt::format("dependency '{}' skipped: {}", d, dep->reason);
                records_.push_back(std::move(rec));
                return;
            }
        }
        rec.status = StageStatus::Ok;
        try {
            body(rec);
        } catch (const Error& e) {
            rec.status = StageStatus::Failed;
            rec.error = e.code();
            rec.reason = fmt::format("{} error: {}", to_string(e.code()), e.what());
        } catch (const std::exception& e) {
            rec.status = StageStatus::Failed;
            rec.reason = e.what();
        }
        records_.push_back(std::move(rec));
    }

    [[nodiscard]] const StageRecord* find(std::string_view name) const {
        for (const auto& r : records_)
            if (r.name == name) return &r;
        return nullptr;
    }

private:
    std::vector<StageRecord>& records_;
};

void skip(StageRecord& rec, std::string reason) {
    rec.status = StageStatus::Skipped;
    rec.reason = std::move(reason);
}

std::string read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PipelineReport run_on_bytes(const PipelineConfig& config, const std::string* bytes,
                            const std::string& io_error) {
    validate(config);
    PipelineReport rep;
    rep.config = config;
    rep.version = IPSERIES_VERSION;
    StageRunner run(rep.stages);

    std::optional<RawTable> table;
    run("ingest", {}, [&](StageRecord&) {
        if (bytes == nullptr) throw Error(ErrorCode::Io, io_error);
        rep.data_sha256 = sha256_hex(*bytes);
        table = parse_csv(*bytes);
        rep.rows_read = table->size();
    });

    run("truncate", {"ingest"}, [&](StageRecord&) {
        const std::size_t keep = config.truncate_to;
        if (keep > table->size())
            throw Error(ErrorCode::Bounds,
                        fmt::format("truncate_to = {} exceeds the {} rows available", keep, table->size()));
        rep.raw[0] = to_monthly_series(*table, Column::Trademarks, keep);
        rep.raw[1] = to_monthly_series(*table, Column::Patents, keep);
    });

    // Outlier repair is optional for short inputs: the raw data flow on.
    run("outliers", {"truncate"}, [&](StageRecord& rec) {
        if (rep.raw[0]->size() < prep::kMinOutlierLength) {
            rep.cleaned[0] = rep.raw[0];
            rep.cleaned[1] = rep.raw[1];
            skip(rec, fmt::format("series too short for outlier detection ({} < {} months); "
                                  "downstream stages use unrepaired data",
                                  rep.raw[0]->size(), prep::kMinOutlierLength));
            return;
        }
        auto pair = prep::clean_pair(*rep.raw[0], *rep.raw[1], config.outlier_threshold);
        rep.outliers[0] = std::move(pair.trademark_report);
        rep.outliers[1] = std::move(pair.patent_report);
        rep.cleaned[0] = std::move(pair.trademarks);
        rep.cleaned[1] = std::move(pair.patents);
    });
    // Stages below need cleaned (or passed-through) data, whatever the
    // outlier stage's status.
    const bool have_data = rep.cleaned[0].has_value();
    const std::string_view data_dep = have_data ? "truncate" : "outliers";

    run("descriptives", {data_dep}, [&](StageRecord&) {
        for (int s = 0; s < 2; ++s) rep.summary[s] = descriptives::summary_stats(*rep.cleaned[s]);
    });
    run("decomposition", {data_dep}, [&](StageRecord&) {
        for (int s = 0; s < 2; ++s) rep.decomposition[s] = descriptives::decompose_additive(*rep.cleaned[s]);
    });
    run("correlation", {data_dep}, [&](StageRecord&) {
        rep.spearman = descriptives::rank_correlation(*rep.cleaned[0], *rep.cleaned[1],
                                                      descriptives::RankMethod::Spearman);
        rep.kendall = descriptives::rank_correlation(*rep.cleaned[0], *rep.cleaned[1],
                                                     descriptives::RankMethod::Kendall);
    });
    run("wavelet", {data_dep}, [&](StageRecord&) {
        rep.xwt = wavelet::cross_wavelet(*rep.cleaned[0], *rep.cleaned[1], {}, config.alpha);
    });
    run("efp", {data_dep}, [&](StageRecord&) {
        for (int s = 0; s < 2; ++s) {
            rep.efp[s].clear();
            for (auto kind : breaks::kAllEfpKinds) {
                auto p = breaks::efp(*rep.cleaned[s], kind, config.efp_bandwidth);
                auto t = breaks::sctest(p, config.alpha);
                rep.efp[s].push_back({std::move(p), t});
            }
        }
    });
    run("breakpoints", {data_dep}, [&](StageRecord& rec) {
        const std::size_t n = rep.cleaned[0]->size();
        const auto regime = static_cast<std::size_t>(std::floor(static_cast<double>(n) * config.efp_bandwidth));
        if (regime < kMinRegimeMonths) {
            skip(rec, fmt::format("series too short: minimum regime floor(n*h) = {} months is below one "
                                  "seasonal cycle ({} months)",
                                  regime, kMinRegimeMonths));
            return;
        }
        for (int s = 0; s < 2; ++s) {
            auto b = breaks::date_breakpoints(*rep.cleaned[s], config.efp_bandwidth, config.max_breaks);
            rep.breakpoints[s] = breaks::breakpoint_confint(*rep.cleaned[s], b, config.ci_level, config.ci_convention);
        }
    });
    run("segments", {"breakpoints"}, [&](StageRecord&) {
        rep.segments = breaks::derive_segments(*rep.breakpoints[0], *rep.breakpoints[1], full_span(*rep.cleaned[0]));
    });

    auto windows = [&] {
        std::vector<Segment> w{full_span(*rep.cleaned[0])};
        for (const auto& s : rep.segments->segments) w.push_back(s);
        return w;
    };
    run("cointegration", {"segments"}, [&](StageRecord& rec) {
        std::vector<std::string> errors;
        for (const auto& seg : windows()) {
            CointegrationEntry e{seg, {}, {}, {}};
            try {
                const auto x = slice_segment(*rep.cleaned[0], seg);
                const auto y = slice_segment(*rep.cleaned[1], seg);
                e.johansen = integration::johansen_trace(x, y, config.johansen_lags);
                e.pz = integration::phillips_ouliaris_pz(x, y, config.pz_demean);
            } catch (const Error& err) {
                e.error = fmt::format("{} error: {}", to_string(err.code()), err.what());
                errors.push_back(fmt::format("segment {}: {}", seg.label, e.error));
            }
            rep.cointegration.push_back(std::move(e));
        }
        if (!errors.empty()) {
            rec.status = StageStatus::Failed;
            rec.reason = fmt::format("{}", fmt::join(errors, "; "));
        }
    });
    run("integration_order", {"segments"}, [&](StageRecord& rec) {
        integration::NdiffsOptions opt;
        opt.alpha = config.alpha;
        opt.adf_lags = config.adf_lags;
        std::vector<std::string> errors;
        for (const auto& seg : windows()) {
            for (std::size_t s = 0; s < 2; ++s) {
                IntegrationEntry e{seg, s, {}, {}};
                try {
                    const auto x = slice_segment(*rep.cleaned[s], seg);
                    for (std::size_t t = 0; t < 3; ++t)
                        e.order[t] = integration::ndiffs(x, integration::kAllUnitRootTests[t], opt);
                } catch (const Error& err) {
                    e.error = fmt::format("{} error: {}", to_string(err.code()), err.what());
                    errors.push_back(fmt::format("segment {} {}: {}", seg.label, kSeriesNames[s], e.error));
                }
                rep.integration.push_back(std::move(e));
            }
        }
        if (!errors.empty()) {
            rec.status = StageStatus::Failed;
            rec.reason = fmt::format("{}", fmt::join(errors, "; "));
        }
    });
    return rep;
}

json config_json(const PipelineConfig& c) {
    std::vector<std::string> formats;
    for (auto f : c.formats) formats.emplace_back(to_string(f));
    return {{"input", c.input.filename().string()},
            {"truncate_to", c.truncate_to},
            {"outlier_threshold", c.outlier_threshold},
            {"h", c.efp_bandwidth},
            {"alpha", c.alpha},
            {"johansen_lags", c.johansen_lags},
            {"max_breaks", c.max_breaks},
            {"ci_level", c.ci_level},
            {"ci_convention", c.ci_convention == breaks::CiConvention::Textbook ? "textbook" : "reference"},
            {"adf_lags", c.adf_lags ? json(*c.adf_lags) : json("auto")},
            {"pz_demean", c.pz_demean == integration::PzDemean::Constant ? "constant" : "none"},
            {"formats", formats}};
}

json segment_json(const Segment& s) {
    return {{"label", s.label}, {"start", s.start.iso()}, {"end", s.end.iso()}, {"length", s.length()}};
}

}  // namespace

std::string_view to_string(Format f) noexcept {
    switch (f) {
        case Format::Json: return "json";
        case Format::Markdown: return "md";
        case Format::Csv: return "csv";
        case Format::Svg: return "svg";
    }
    return "?";
}

std::set<Format> parse_formats(std::string_view list) {
    std::set<Format> out;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const auto comma = std::min(list.find(',', pos), list.size());
        const auto item = lower(trim(list.substr(pos, comma - pos)));
        if (item == "json") out.insert(Format::Json);
        else if (item == "md" || item == "markdown") out.insert(Format::Markdown);
        else if (item == "csv") out.insert(Format::Csv);
        else if (item == "svg") out.insert(Format::Svg);
        else if (!item.empty())
            throw Error(ErrorCode::Parameter, fmt::format("unknown format '{}' (expected json, md, csv, svg)", item));
        pos = comma + 1;
    }
    if (out.empty()) throw Error(ErrorCode::Parameter, "no output format selected");
    return out;
}

void validate(const PipelineConfig& c) {
    if (!(c.alpha > 0.0 && c.alpha < 0.5))
        throw Error(ErrorCode::Parameter, fmt::format("alpha must lie in (0, 0.5), got {}", c.alpha));
    if (!(c.efp_bandwidth > 0.0 && c.efp_bandwidth < 1.0))
        throw Error(ErrorCode::Parameter, fmt::format("h must lie in (0, 1), got {}", c.efp_bandwidth));
    if (c.johansen_lags < 2)
        throw Error(ErrorCode::Parameter, fmt::format("Johansen lag order must be at least 2, got {}", c.johansen_lags));
    if (c.truncate_to == 0) throw Error(ErrorCode::Parameter, "truncate_to must be positive");
    if (!(c.outlier_threshold > 0.0))
        throw Error(ErrorCode::Parameter, fmt::format("outlier threshold must be positive, got {}", c.outlier_threshold));
    if (!(c.ci_level > 0.0 && c.ci_level < 1.0))
        throw Error(ErrorCode::Parameter, fmt::format("confidence level must lie in (0, 1), got {}", c.ci_level));
}

std::string_view to_string(StageStatus s) noexcept {
    switch (s) {
        case StageStatus::Ok: return "ok";
        case StageStatus::Failed: return "failed";
        case StageStatus::Skipped: return "skipped";
    }
    return "?";
}

const StageRecord& PipelineReport::stage(std::string_view name) const {
    for (const auto& r : stages)
        if (r.name == name) return r;
    throw Error(ErrorCode::Parameter, fmt::format("unknown stage '{}'", name));
}

bool PipelineReport::any_failed() const noexcept {
    return std::any_of(stages.begin(), stages.end(), [](const StageRecord& r) { return r.status == StageStatus::Failed; });
}

PipelineReport run_pipeline(const PipelineConfig& config) {
    std::string bytes;
    std::string io_error;
    try {
        bytes = read_bytes(config.input);
    } catch (const Error& e) {
        io_error = e.what();
        return run_on_bytes(config, nullptr, io_error);
    }
    return run_on_bytes(config, &bytes, io_error);
}

PipelineReport run_pipeline(const PipelineConfig& config, std::string_view csv_bytes) {
    const std::string bytes(csv_bytes);
    return run_on_bytes(config, &bytes, {});
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorCode::Io, "SHA-256 computation failed");
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
    return out;
}

json to_json(const PipelineReport& r) {
    json j;
    j["provenance"] = {{"tool", "ipseries"},
                       {"version", r.version},
                       {"data_sha256", r.data_sha256},
                       {"rows_read", r.rows_read},
                       {"config", config_json(r.config)}};

    json stages = json::array();
    for (const auto& s : r.stages) {
        json e{{"name", s.name}, {"status", to_string(s.status)}};
        if (!s.reason.empty()) e["reason"] = s.reason;
        if (s.error) e["error_code"] = to_string(*s.error);
        stages.push_back(std::move(e));
    }
    j["stages"] = std::move(stages);

    json series = json::object();
    for (int s = 0; s < 2; ++s) {
        json e = json::object();
        if (r.raw[s]) e["raw"] = {{"start", r.raw[s]->start().iso()}, {"values", r.raw[s]->values()}};
        if (r.cleaned[s]) e["cleaned"] = r.cleaned[s]->values();
        e["outliers"] = r.outliers[s] ? prep::to_json(*r.outliers[s]) : json(nullptr);
        if (r.outliers[s]) {
            e["outlier_model"] = {{"threshold", r.outliers[s]->threshold},
                                  {"theta", r.outliers[s]->theta},
                                  {"seasonal_theta", r.outliers[s]->seasonal_theta}};
        }
        e["summary"] = r.summary[s] ? descriptives::to_json(*r.summary[s]) : json(nullptr);
        e["decomposition"] = r.decomposition[s] ? descriptives::to_json(*r.decomposition[s]) : json(nullptr);
        json efp = json::array();
        for (const auto& f : r.efp[s]) {
            json p = breaks::to_json(f.process);
            p["test"] = breaks::to_json(f.test);
            efp.push_back(std::move(p));
        }
        e["efp"] = std::move(efp);
        e["breakpoints"] = r.breakpoints[s] ? breaks::to_json(*r.breakpoints[s]) : json(nullptr);
        series[std::string(kSeriesNames[s])] = std::move(e);
    }
    j["series"] = std::move(series);

    j["correlations"] = (r.spearman && r.kendall) ? json{{"spearman", *r.spearman}, {"kendall", *r.kendall}} : json(nullptr);
    j["cross_wavelet"] = r.xwt ? wavelet::to_json(*r.xwt) : json(nullptr);
    j["segments"] = r.segments ? breaks::to_json(*r.segments) : json(nullptr);

    json coint = json::array();
    for (const auto& c : r.cointegration) {
        json e{{"segment", segment_json(c.segment)}};
        e["johansen"] = c.johansen ? integration::to_json(*c.johansen) : json(nullptr);
        e["pz"] = c.pz ? integration::to_json(*c.pz) : json(nullptr);
        if (!c.error.empty()) e["error"] = c.error;
        coint.push_back(std::move(e));
    }
    j["cointegration"] = std::move(coint);

    json integ = json::array();
    for (const auto& c : r.integration) {
        json e{{"segment", segment_json(c.segment)}, {"series", kSeriesNames[c.series]}};
        for (std::size_t t = 0; t < 3; ++t) {
            const auto name = lower(integration::to_string(integration::kAllUnitRootTests[t]));
            e[name] = c.order[t] ? json{{"d", c.order[t]->d}, {"capped", c.order[t]->capped}} : json(nullptr);
        }
        if (!c.error.empty()) e["error"] = c.error;
        integ.push_back(std::move(e));
    }
    j["integration_order"] = std::move(integ);

    json tables = json::object();
    for (const auto& t : build_tables(r)) tables[t.key] = to_json(t);
    j["tables"] = std::move(tables);
    return j;
}

}  // namespace ipseries::report
