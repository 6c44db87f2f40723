#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "ipseries/breaks/breakpoints.hpp"
#include "ipseries/breaks/efp.hpp"
#include "ipseries/core/csv.hpp"
#include "ipseries/descriptives/descriptives.hpp"
#include "ipseries/error.hpp"
#include "ipseries/integration/cointegration.hpp"
#include "ipseries/integration/unit_root.hpp"
#include "ipseries/prep/outliers.hpp"
#include "ipseries/report/pipeline.hpp"
#include "ipseries/report/plots.hpp"
#include "ipseries/report/tables.hpp"
#include "ipseries/wavelet/wavelet.hpp"

namespace py = pybind11;
using namespace ipseries;

namespace {

using Vec = std::vector<double>;

// Hands results to Python as plain dicts/lists; the JSON shape is the same
// one the CLI writes, so there is a single serialisation to keep in sync.
py::object to_py(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

breaks::EfpKind efp_kind(std::string_view name) {
    for (auto k : breaks::kAllEfpKinds) {
        std::string s(breaks::to_string(k));
        std::string lower;
        for (char c : s) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (name == s || name == lower) return k;
    }
    throw Error(ErrorCode::Parameter, "unknown process type: " + std::string(name));
}

integration::UnitRootTest unit_root_test(std::string_view name) {
    for (auto t : integration::kAllUnitRootTests)
        if (integration::to_string(t) == name) return t;
    throw Error(ErrorCode::Parameter, "unknown unit-root test: " + std::string(name));
}

descriptives::RankMethod rank_method(std::string_view name) {
    if (name == "spearman") return descriptives::RankMethod::Spearman;
    if (name == "kendall") return descriptives::RankMethod::Kendall;
    throw Error(ErrorCode::Parameter, "unknown rank method: " + std::string(name));
}

MonthlySeries make_series(const std::string& start, Vec values) {
    return MonthlySeries(MonthDate::from_iso(start), std::move(values));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Monthly IP-filing series analysis";
    m.attr("__version__") = IPSERIES_VERSION;

    // The module keeps the class alive; the translator only borrows it.
    static py::handle error_type;
    error_type = py::exception<Error>(m, "IpseriesError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = error_type(e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    m.def("read_csv", [](const std::filesystem::path& path, std::size_t keep) {
        const auto raw = read_csv_file(path);
        py::dict out;
        for (auto [col, key] : {std::pair{Column::Trademarks, "trademarks"}, std::pair{Column::Patents, "patents"}}) {
            const auto s = to_monthly_series(raw, col, keep == 0 ? raw.size() : keep);
            out["start"] = s.start().iso();
            out[key] = std::vector<double>(s.values().begin(), s.values().end());
        }
        return out;
    }, py::arg("path"), py::arg("keep") = 472,
       "Reads the monthly CSV, keeping the first `keep` rows (0 = all). Returns start (YYYY-MM) and both series.");

    m.def("detect_outliers", [](const std::string& start, Vec values, double threshold) {
        const auto s = make_series(start, std::move(values));
        const auto rep = prep::detect_outliers(s, threshold);
        const auto cleaned = prep::replace_outliers(s, rep);
        py::dict out;
        out["flags"] = to_py(prep::to_json(rep));
        out["threshold"] = rep.threshold;
        out["theta"] = rep.theta;
        out["seasonal_theta"] = rep.seasonal_theta;
        out["cleaned"] = std::vector<double>(cleaned.values().begin(), cleaned.values().end());
        return out;
    }, py::arg("start"), py::arg("values"), py::arg("threshold") = prep::kDefaultOutlierThreshold);

    m.def("summary_stats", [](Vec x) { return to_py(descriptives::to_json(descriptives::summary_stats(x))); },
          py::arg("values"));
    m.def("rank_correlation", [](Vec x, Vec y, const std::string& method) {
        return descriptives::rank_correlation(x, y, rank_method(method));
    }, py::arg("x"), py::arg("y"), py::arg("method") = "spearman");
    m.def("decompose", [](const std::string& start, Vec values) {
        return to_py(descriptives::to_json(descriptives::decompose_additive(make_series(start, std::move(values)))));
    }, py::arg("start"), py::arg("values"));

    m.def("cross_wavelet", [](Vec x, Vec y, double alpha) {
        return to_py(wavelet::to_json(wavelet::cross_wavelet(x, y, {}, alpha)));
    }, py::arg("x"), py::arg("y"), py::arg("alpha") = 0.05);
    m.def("ar1_fit", [](Vec x) { return wavelet::ar1_fit(x); }, py::arg("x"));

    m.def("efp", [](Vec y, const std::string& kind, double h, double alpha) {
        const auto p = breaks::efp(y, efp_kind(kind), h);
        py::dict out = to_py(breaks::to_json(p));
        out["test"] = to_py(breaks::to_json(breaks::sctest(p, alpha)));
        return out;
    }, py::arg("y"), py::arg("kind") = "ols-cusum", py::arg("h") = breaks::kDefaultBandwidth,
       py::arg("alpha") = 0.05, "Empirical fluctuation process with its structural-change test.");

    m.def("breakpoints", [](Vec y, double h, std::size_t max_breaks, double level, const std::string& start) {
        const auto s = make_series(start, std::move(y));
        auto b = breaks::date_breakpoints(s, h, max_breaks);
        if (b.m() > 0) b = breaks::breakpoint_confint(s, b, level);
        return to_py(breaks::to_json(b));
    }, py::arg("y"), py::arg("h") = 0.15, py::arg("max_breaks") = breaks::kDefaultMaxBreaks,
       py::arg("level") = 0.95, py::arg("start") = "1970-01", "BIC-selected mean-shift breakpoints with confidence intervals.");

    m.def("unit_root_test", [](Vec x, const std::string& test, double alpha, std::optional<std::size_t> lags) {
        return to_py(integration::to_json(integration::run_test(x, unit_root_test(test), alpha, lags)));
    }, py::arg("x"), py::arg("test") = "kpss", py::arg("alpha") = 0.05, py::arg("lags") = py::none());
    m.def("ndiffs", [](Vec x, const std::string& test, double alpha, std::size_t max_d) {
        integration::NdiffsOptions o;
        o.alpha = alpha;
        o.max_d = max_d;
        const auto r = integration::ndiffs(x, unit_root_test(test), o);
        return py::make_tuple(r.d, r.capped);
    }, py::arg("x"), py::arg("test") = "kpss", py::arg("alpha") = 0.05, py::arg("max_d") = 2,
       "Returns (d, capped).");

    m.def("johansen", [](Vec x, Vec y, std::size_t K) {
        return to_py(integration::to_json(integration::johansen_trace(x, y, K)));
    }, py::arg("x"), py::arg("y"), py::arg("K") = 2);
    m.def("phillips_ouliaris", [](Vec x, Vec y) {
        return to_py(integration::to_json(integration::phillips_ouliaris_pz(x, y)));
    }, py::arg("x"), py::arg("y"));

    m.def("analyze", [](const std::filesystem::path& input, std::optional<std::filesystem::path> output_dir,
                        std::size_t truncate, double alpha, double h, const std::string& formats) {
        report::PipelineConfig c;
        c.input = input;
        c.truncate_to = truncate;
        c.alpha = alpha;
        c.efp_bandwidth = h;
        c.formats = report::parse_formats(formats);
        if (output_dir) c.output_dir = *output_dir;
        nlohmann::json j;
        {
            py::gil_scoped_release release;
            const auto rep = report::run_pipeline(c);
            if (output_dir) {
                report::emit_tables(rep, c.output_dir, c.formats);
                if (c.formats.count(report::Format::Svg)) report::emit_plots(rep, c.output_dir);
            }
            j = report::to_json(rep);
        }
        return to_py(j);
    }, py::arg("input"), py::arg("output_dir") = py::none(), py::arg("truncate") = 472,
       py::arg("alpha") = 0.05, py::arg("h") = breaks::kDefaultBandwidth, py::arg("formats") = "json,md,csv,svg",
       "Runs the full pipeline; writes tables and figures when output_dir is given. Returns the report dict.");
}
