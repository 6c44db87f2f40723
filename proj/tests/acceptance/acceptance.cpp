// End-to-end acceptance checks on the bundled dataset. Prints one PASS/FAIL
// line per criterion and exits non-zero if any criterion fails.
//
// usage: ipseries_acceptance <ipseries-cli> <unit-test-binary>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <fmt/format.h>

#include "ipseries/report/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ipseries;
using namespace ipseries::report;

namespace {

struct Check {
    bool ok = true;
    std::vector<std::string> misses;
    std::vector<std::string> notes;

    void expect(bool cond, std::string what) {
        if (!cond) {
            ok = false;
            misses.push_back(std::move(what));
        }
    }
    void note(std::string s) { notes.push_back(std::move(s)); }
};

int failures = 0;

void print_result(int id, const std::string& name, const Check& c) {
    if (!c.ok) ++failures;
    fmt::print("{} criterion {:>2}: {}", c.ok ? "PASS" : "FAIL", id, name);
    if (!c.notes.empty()) {
        fmt::print(" [");
        for (std::size_t i = 0; i < c.notes.size(); ++i) fmt::print("{}{}", i ? "; " : "", c.notes[i]);
        fmt::print("]");
    }
    fmt::print("\n");
    for (const auto& m : c.misses) fmt::print("    miss: {}\n", m);
}

bool within(double got, double want, double tol) { return std::abs(got - want) <= tol + 1e-12; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

// ---------------------------------------------------------------- 1

Check table1(const PipelineReport& r) {
    Check c;
    struct Want {
        double min, median, max, mean, sd, skew, kurt;
    };
    const Want want[2] = {{1895, 15456, 37317, 15276, 9418.054, 0.202, 1.76},
                          {3134, 14468, 30969, 13930, 6523.347, 0.185, 1.76}};
    for (int s = 0; s < 2; ++s) {
        if (!r.summary[s]) {
            c.expect(false, fmt::format("{}: no summary", kSeriesNames[s]));
            continue;
        }
        const auto& g = *r.summary[s];
        const auto& w = want[s];
        const auto name = kSeriesNames[s];
        // Reported values are whole counts, the median rounded half to even.
        c.expect(std::round(g.min) == w.min, fmt::format("{} min {:.0f} vs {:.0f}", name, g.min, w.min));
        c.expect(std::nearbyint(g.median) == w.median,
                 fmt::format("{} median {} vs {:.0f}", name, g.median, w.median));
        c.expect(std::round(g.max) == w.max, fmt::format("{} max {:.0f} vs {:.0f}", name, g.max, w.max));
        c.expect(within(g.mean, w.mean, 20), fmt::format("{} mean {:.1f} vs {} +-20", name, g.mean, w.mean));
        c.expect(within(g.sd, w.sd, 50), fmt::format("{} sd {:.3f} vs {} +-50", name, g.sd, w.sd));
        c.expect(within(g.skewness, w.skew, 0.03), fmt::format("{} skewness {:.3f} vs {} +-0.03", name, g.skewness, w.skew));
        c.expect(within(g.kurtosis, w.kurt, 0.05), fmt::format("{} kurtosis {:.3f} vs {} +-0.05", name, g.kurtosis, w.kurt));
        c.note(fmt::format("{} min/med/max {:.0f}/{:.1f}/{:.0f} mean {:.1f} sd {:.3f} skew {:.3f} kurt {:.3f}", name,
                           g.min, g.median, g.max, g.mean, g.sd, g.skewness, g.kurtosis));
    }
    return c;
}

// ---------------------------------------------------------------- 2

Check correlations(const PipelineReport& r) {
    Check c;
    c.expect(r.spearman && within(*r.spearman, 0.9431803, 0.005), "Spearman outside 0.9431803 +-0.005");
    c.expect(r.kendall && within(*r.kendall, 0.8024742, 0.005), "Kendall outside 0.8024742 +-0.005");
    if (r.spearman && r.kendall) c.note(fmt::format("spearman {:.7f} kendall {:.7f}", *r.spearman, *r.kendall));
    return c;
}

// ---------------------------------------------------------------- 3

Check recall(const PipelineReport& r) {
    Check c;
    const std::vector<std::vector<MonthDate>> listed = {
        {MonthDate(1982, 9), MonthDate(1989, 11), MonthDate(1999, 6)},
        {MonthDate(1982, 9), MonthDate(1995, 6), MonthDate(2007, 10), MonthDate(2013, 3)}};
    for (int s = 0; s < 2; ++s) {
        if (!r.outliers[s]) {
            c.expect(false, fmt::format("{}: no outlier report", kSeriesNames[s]));
            continue;
        }
        std::size_t extra = 0;
        std::string flagged;
        for (const auto& f : r.outliers[s]->flags) {
            bool known = false;
            for (const auto& d : listed[s]) known |= d == f.date;
            extra += known ? 0 : 1;
            flagged += (flagged.empty() ? "" : ",") + f.date.iso();
        }
        for (const auto& d : listed[s]) {
            bool hit = false;
            for (const auto& f : r.outliers[s]->flags) hit |= f.date == d;
            c.expect(hit, fmt::format("{} {} not flagged", kSeriesNames[s], d.iso()));
        }
        c.expect(extra <= 3, fmt::format("{}: {} additional flags", kSeriesNames[s], extra));
        c.note(fmt::format("{} flags {}", kSeriesNames[s], flagged));
    }
    return c;
}

// ---------------------------------------------------------------- 4

Check table2(const PipelineReport& r) {
    Check c;
    for (int s = 0; s < 2; ++s) {
        c.expect(r.efp[s].size() == 4, fmt::format("{}: {} processes", kSeriesNames[s], r.efp[s].size()));
        for (const auto& e : r.efp[s]) {
            const auto kind = breaks::to_string(e.process.kind);
            c.expect(e.test.reject, fmt::format("{} {} does not reject", kSeriesNames[s], kind));
            if (breaks::is_mosum(e.process.kind)) {
                c.expect(e.test.p_is_table_floor && e.test.p_value == 0.01,
                         fmt::format("{} {} p = {} not at table floor", kSeriesNames[s], kind, e.test.p_value));
            } else {
                c.expect(e.test.p_value < 1e-12, fmt::format("{} {} p = {}", kSeriesNames[s], kind, e.test.p_value));
            }
        }
    }
    return c;
}

// ---------------------------------------------------------------- 5

Check table3(const PipelineReport& r) {
    Check c;
    struct Row {
        MonthDate lo, at, hi;
    };
    const std::vector<std::vector<Row>> want = {
        {{MonthDate(1987, 2), MonthDate(1987, 5), MonthDate(1987, 7)},
         {MonthDate(1993, 1), MonthDate(1993, 3), MonthDate(1993, 4)},
         {MonthDate(1998, 10), MonthDate(1999, 1), MonthDate(1999, 3)},
         {MonthDate(2004, 10), MonthDate(2005, 2), MonthDate(2005, 11)},
         {MonthDate(2010, 9), MonthDate(2011, 2), MonthDate(2011, 4)}},
        {{MonthDate(1988, 1), MonthDate(1988, 2), MonthDate(1988, 4)},
         {MonthDate(1993, 12), MonthDate(1994, 4), MonthDate(1994, 5)},
         {MonthDate(1999, 12), MonthDate(2000, 2), MonthDate(2000, 7)},
         {MonthDate(2010, 4), MonthDate(2011, 2), MonthDate(2011, 4)}}};
    for (int s = 0; s < 2; ++s) {
        if (!r.breakpoints[s]) {
            c.expect(false, fmt::format("{}: no breakpoints", kSeriesNames[s]));
            continue;
        }
        const auto& b = r.breakpoints[s]->breaks;
        c.expect(b.size() == want[s].size(),
                 fmt::format("{}: {} breaks, want {}", kSeriesNames[s], b.size(), want[s].size()));
        std::string got;
        for (std::size_t i = 0; i < std::min(b.size(), want[s].size()); ++i) {
            const auto& w = want[s][i];
            const auto& g = b[i];
            got += fmt::format("{}{}({}..{})", got.empty() ? "" : " ", g.date.label(), g.ci_low.label(), g.ci_high.label());
            c.expect(std::abs(distance(w.at, g.date)) <= 2,
                     fmt::format("{} break {}: {} vs {}", kSeriesNames[s], i + 1, g.date.label(), w.at.label()));
            c.expect(std::abs(distance(w.lo, g.ci_low)) <= 3,
                     fmt::format("{} break {} lower: {} vs {}", kSeriesNames[s], i + 1, g.ci_low.label(), w.lo.label()));
            c.expect(std::abs(distance(w.hi, g.ci_high)) <= 3,
                     fmt::format("{} break {} upper: {} vs {}", kSeriesNames[s], i + 1, g.ci_high.label(), w.hi.label()));
        }
        c.note(fmt::format("{}: {}", kSeriesNames[s], got));
    }
    return c;
}

// ---------------------------------------------------------------- 6

Check table4(const PipelineReport& r) {
    Check c;
    const std::vector<std::pair<MonthDate, MonthDate>> want = {
        {MonthDate(1977, 9), MonthDate(1987, 4)},  {MonthDate(1988, 2), MonthDate(1993, 2)},
        {MonthDate(1994, 5), MonthDate(1998, 12)}, {MonthDate(2000, 3), MonthDate(2005, 1)},
        {MonthDate(2005, 3), MonthDate(2011, 1)},  {MonthDate(2011, 3), MonthDate(2016, 12)}};
    if (!r.segments) {
        c.expect(false, "no segments");
        return c;
    }
    const auto& s = r.segments->segments;
    c.expect(s.size() == want.size(), fmt::format("{} segments, want 6", s.size()));
    for (std::size_t i = 0; i < std::min(s.size(), want.size()); ++i) {
        c.expect(std::abs(distance(want[i].first, s[i].start)) <= 2 && std::abs(distance(want[i].second, s[i].end)) <= 2,
                 fmt::format("segment {}: {}..{} vs {}..{}", i + 1, s[i].start.label(), s[i].end.label(),
                             want[i].first.label(), want[i].second.label()));
        c.note(fmt::format("{} {}..{}", i + 1, s[i].start.iso(), s[i].end.iso()));
    }
    return c;
}

// ---------------------------------------------------------------- 7

Check table5(const PipelineReport& r) {
    Check c;
    const CointegrationEntry* full = nullptr;
    std::map<int, const CointegrationEntry*> by_label;
    for (const auto& e : r.cointegration) {
        by_label[e.segment.label] = &e;
        if (e.segment.label == 0) full = &e;
    }
    if (!full || !full->johansen || !full->pz) {
        c.expect(false, "full-series cointegration missing");
        return c;
    }
    const double tr = full->johansen->trace[0], pz = full->pz->statistic;
    c.expect(within(tr, 75.47, 0.10 * 75.47) && tr > 24.60, fmt::format("full trace(r=0) {:.2f}", tr));
    c.expect(within(pz, 222.6575, 0.15 * 222.6575) && pz > 55.1911, fmt::format("full Pz {:.4f}", pz));
    c.note(fmt::format("full trace {:.2f} Pz {:.4f}", tr, pz));

    // Reported cells: (segment, column, level). Columns: 0 = r<=1, 1 = r=0, 2 = Pz.
    struct Cell {
        int segment, column;
        double level;
    };
    const std::vector<Cell> cells = {{0, 1, 0.01}, {0, 2, 0.01}, {1, 1, 0.05}, {2, 1, 0.01}, {3, 1, 0.01},
                                     {3, 2, 0.05}, {4, 0, 0.05}, {4, 1, 0.01}, {5, 0, 0.05}, {5, 1, 0.01},
                                     {5, 2, 0.01}, {6, 1, 0.01}, {6, 2, 0.05}};
    std::size_t agree = 0;
    for (const auto& cell : cells) {
        const auto it = by_label.find(cell.segment);
        double got = 0;
        if (it != by_label.end()) {
            const auto& e = *it->second;
            if (cell.column < 2 && e.johansen) got = e.johansen->rejected_at(cell.column == 0 ? 1 : 0);
            if (cell.column == 2 && e.pz) got = e.pz->rejected_at();
        }
        if (got == cell.level) {
            ++agree;
        } else {
            static const char* cols[] = {"r<=1", "r=0", "Pz"};
            c.note(fmt::format("segment {} {}: {} vs {}", cell.segment, cols[cell.column],
                               got > 0 ? fmt::format("{:g}%", got * 100) : "n.s.", fmt::format("{:g}%", cell.level * 100)));
        }
    }
    c.expect(agree >= 10, fmt::format("verdict pattern agrees in {} of 13 cells", agree));
    c.note(fmt::format("{}/13 reported cells agree", agree));
    return c;
}

// ---------------------------------------------------------------- 8

Check table6(const PipelineReport& r) {
    Check c;
    // Rows: full, 1..6; per row Trademarks then Patents; columns KPSS, ADF, PP.
    const int want[7][2][3] = {{{1, 1, 1}, {1, 1, 1}}, {{1, 1, 1}, {1, 0, 0}}, {{1, 1, 1}, {1, 0, 0}},
                               {{1, 1, 1}, {1, 1, 0}}, {{1, 0, 0}, {0, 0, 0}}, {{0, 0, 0}, {0, 0, 0}},
                               {{1, 1, 1}, {0, 0, 0}}};
    std::size_t agree = 0, cells = 0;
    for (const auto& e : r.integration) {
        const int seg = e.segment.label;
        if (seg < 0 || seg > 6) continue;
        for (int k = 0; k < 3; ++k) {
            ++cells;
            const int w = want[seg][e.series][k];
            if (e.order[static_cast<std::size_t>(k)] && e.order[static_cast<std::size_t>(k)]->d == w) {
                ++agree;
            } else {
                static const char* tests[] = {"KPSS", "ADF", "PP"};
                const auto& o = e.order[static_cast<std::size_t>(k)];
                c.note(fmt::format("{} segment {} {}: {} vs {}", kSeriesNames[e.series], seg, tests[k],
                                   o ? std::to_string(o->d) : "-", w));
                if (seg == 0) c.expect(false, fmt::format("full-dataset {} {} not 1", kSeriesNames[e.series], tests[k]));
            }
        }
    }
    c.expect(cells == 42, fmt::format("{} cells, want 42", cells));
    c.expect(agree >= 34, fmt::format("{} of 42 cells agree", agree));
    c.note(fmt::format("{}/42 cells agree", agree));
    return c;
}

// ---------------------------------------------------------------- 9

Check properties(const std::string& unit_tests, const fs::path& work) {
    Check c;
    const std::string filter =
        "Breakpoints.DynamicProgramMatchesBruteForce:Decomposition.Identities:Efp.OlsCusumEndpointsZero:"
        "Johansen.InvariantsAndSwap:Johansen.TraceFromEigenvalues:CrossWavelet.SelfSpectrumIdentity:"
        "ScTest.MonteCarloSize:Pz.IndependentRandomWalksUnderNull:Adf.MonteCarlo:Kpss.MonteCarlo";
    const auto log = work / "properties.log";
    const std::string cmd = quote(unit_tests) + " --gtest_filter=" + quote(filter) + " > " + quote(log.string()) + " 2>&1";
    const int rc = std::system(cmd.c_str());
    const auto text = slurp(log);
    const auto passed = text.find("[  PASSED  ] 10 tests.") != std::string::npos;
    c.expect(rc == 0 && passed, fmt::format("property suites exit status {}", rc));
    if (!passed) {
        std::istringstream lines(text);
        for (std::string line; std::getline(lines, line);)
            if (line.rfind("[  FAILED  ]", 0) == 0) c.note(line);
    }
    c.note("10 suites");
    return c;
}

// ---------------------------------------------------------------- 10

Check determinism(const std::string& cli, const fs::path& data, const fs::path& work) {
    Check c;
    std::string previous;
    for (int run = 0; run < 2; ++run) {
        const auto out = work / fmt::format("run{}", run);
        fs::remove_all(out);
        const std::string cmd = "IPSERIES_NO_COLOR=1 " + quote(cli) + " analyze --input " + quote(data.string()) +
                                " --out " + quote(out.string()) + " > " + quote((work / "cli.log").string()) + " 2>&1";
        const int rc = std::system(cmd.c_str());
        c.expect(rc == 0, fmt::format("analyze run {} exit status {}", run + 1, rc));
        const auto json = slurp(out / "report.json");
        c.expect(!json.empty(), fmt::format("run {} wrote no report.json", run + 1));
        if (run == 1) {
            c.expect(json == previous, "report.json differs between runs");
            c.note(fmt::format("{} bytes", json.size()));
        }
        previous = json;
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        fmt::print(stderr, "usage: {} <ipseries-cli> <unit-test-binary>\n", argv[0]);
        return 2;
    }
    const fs::path data = fs::path(IPSERIES_DATA_DIR) / "uspto_monthly.csv";
    const auto work = fs::temp_directory_path() / fmt::format("ipseries_acceptance_{}", ::getpid());
    fs::create_directories(work);

    PipelineConfig config;
    config.input = data;
    const auto r = run_pipeline(config);
    if (r.any_failed()) {
        for (const auto& s : r.stages)
            if (s.status != StageStatus::Ok) fmt::print("note: stage {} {}: {}\n", s.name, to_string(s.status), s.reason);
    }

    print_result(1, "Table 1 descriptive statistics", table1(r));
    print_result(2, "rank correlations", correlations(r));
    print_result(3, "outlier recall", recall(r));
    print_result(4, "Table 2 fluctuation tests", table2(r));
    print_result(5, "Table 3 break dates and intervals", table3(r));
    print_result(6, "Table 4 segments", table4(r));
    print_result(7, "Table 5 cointegration", table5(r));
    print_result(8, "Table 6 integration orders", table6(r));
    print_result(9, "property suites", properties(argv[2], work));
    print_result(10, "determinism of report.json", determinism(argv[1], data, work));

    fs::remove_all(work);
    fmt::print("{} of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
