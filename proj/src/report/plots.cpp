#include "ipseries/report/plots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <queue>

#include <fmt/format.h>

#include "ipseries/report/tables.hpp"

namespace ipseries::report {

namespace {

constexpr std::string_view kFont = "font-family=\"Helvetica,Arial,sans-serif\"";

std::string esc(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    auto s = fmt::format("{:.2f}", v);
    if (s == "-0.00") s = "0.00";
    return s;
}

class Svg {
public:
    Svg(double w, double h) : w_(w), h_(h) {}

    void raw(std::string_view s) { body_ += s; }
    void rect(double x, double y, double w, double h, std::string_view attrs) {
        body_ += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" {}/>\n", num(x), num(y), num(w), num(h), attrs);
    }
    void line(double x1, double y1, double x2, double y2, std::string_view attrs) {
        body_ += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" {}/>\n", num(x1), num(y1), num(x2), num(y2), attrs);
    }
    void text(double x, double y, std::string_view s, std::string_view attrs = "") {
        body_ += fmt::format("<text x=\"{}\" y=\"{}\" {} {}>{}</text>\n", num(x), num(y), kFont, attrs, esc(s));
    }
    void polyline(const std::vector<std::pair<double, double>>& pts, std::string_view attrs) {
        if (pts.size() < 2) return;
        std::string p;
        for (const auto& [x, y] : pts) p += fmt::format("{}{},{}", p.empty() ? "" : " ", num(x), num(y));
        body_ += fmt::format("<polyline points=\"{}\" fill=\"none\" {}/>\n", p, attrs);
    }
    [[nodiscard]] std::string str() const {
        return fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n"
                           "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n{}</svg>\n",
                           num(w_), num(h_), num(w_), num(h_), body_);
    }

private:
    double w_, h_;
    std::string body_;
};

// Axis-aligned data window mapped onto a pixel rectangle.
struct Panel {
    double x, y, w, h;
    double xmin, xmax, ymin, ymax;

    [[nodiscard]] double px(double v) const { return x + (v - xmin) / (xmax - xmin) * w; }
    [[nodiscard]] double py(double v) const { return y + h - (v - ymin) / (ymax - ymin) * h; }
};

std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double f : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        step = f * mag;
        if (raw <= step) break;
    }
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(std::abs(v) < 1e-9 * step ? 0.0 : v);
    return t;
}

std::string tick_label(double v) {
    if (std::abs(v) >= 1e5 || (std::abs(v) < 1e-3 && v != 0.0)) return fmt::format("{:.3g}", v);
    auto s = fmt::format("{:.3f}", v);
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
    return s;
}

double decimal_year(const MonthDate& d) { return d.year() + (d.month() - 1) / 12.0; }

// Frame, y ticks and x year ticks.
void axes(Svg& svg, const Panel& p, std::string_view ylabel, bool xlabels) {
    svg.rect(p.x, p.y, p.w, p.h, "fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"");
    for (double v : nice_ticks(p.ymin, p.ymax)) {
        const double y = p.py(v);
        svg.line(p.x - 4, y, p.x, y, "stroke=\"#000000\"");
        svg.text(p.x - 6, y + 4, tick_label(v), "font-size=\"10\" text-anchor=\"end\"");
    }
    for (double v : nice_ticks(p.xmin, p.xmax, 8)) {
        const double x = p.px(v);
        svg.line(x, p.y + p.h, x, p.y + p.h + 4, "stroke=\"#000000\"");
        if (xlabels) svg.text(x, p.y + p.h + 16, tick_label(v), "font-size=\"10\" text-anchor=\"middle\"");
    }
    if (!ylabel.empty())
        svg.text(p.x - 52, p.y + p.h / 2, ylabel,
                 fmt::format("font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 {} {})\"", num(p.x - 52),
                             num(p.y + p.h / 2)));
}

std::pair<double, double> range_of(const std::vector<std::optional<double>>& v) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& x : v)
        if (x) lo = std::min(lo, *x), hi = std::max(hi, *x);
    if (!(lo <= hi)) return {0.0, 1.0};
    if (lo == hi) return {lo - 1.0, hi + 1.0};
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

// Polylines over defined runs only.
void series_lines(Svg& svg, const Panel& p, const MonthDate& start, const std::vector<std::optional<double>>& v,
                  std::string_view attrs) {
    std::vector<std::pair<double, double>> run;
    for (std::size_t i = 0; i <= v.size(); ++i) {
        if (i < v.size() && v[i]) {
            run.emplace_back(p.px(decimal_year(start.plus_months(static_cast<long>(i)))), p.py(*v[i]));
            continue;
        }
        svg.polyline(run, attrs);
        run.clear();
    }
}

std::vector<std::optional<double>> wrap(std::span<const double> v) { return {v.begin(), v.end()}; }

// Sequential palette from dark blue through green to yellow.
std::string palette(double u) {
    static constexpr std::array<std::array<double, 3>, 6> stops = {{{0.267, 0.005, 0.329},
                                                                    {0.231, 0.322, 0.545},
                                                                    {0.129, 0.569, 0.549},
                                                                    {0.369, 0.788, 0.384},
                                                                    {0.741, 0.875, 0.149},
                                                                    {0.993, 0.906, 0.144}}};
    u = std::clamp(u, 0.0, 1.0) * (stops.size() - 1);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(u), stops.size() - 2);
    const double f = u - static_cast<double>(i);
    std::array<int, 3> c{};
    for (int k = 0; k < 3; ++k) c[k] = static_cast<int>(std::lround(255.0 * (stops[i][k] * (1 - f) + stops[i + 1][k] * f)));
    return fmt::format("#{:02x}{:02x}{:02x}", c[0], c[1], c[2]);
}

std::string loops_path(const Contour& c, double x0, double y0, double cw, double ch) {
    std::string d;
    for (const auto& loop : c.loops) {
        for (std::size_t i = 0; i < loop.size(); ++i)
            d += fmt::format("{}{} {} ", i == 0 ? "M" : "L", num(x0 + loop[i].first * cw), num(y0 + loop[i].second * ch));
        d += "Z ";
    }
    if (!d.empty()) d.pop_back();
    return d;
}

}  // namespace

std::vector<Contour> mask_contours(const BoolMatrix& mask) {
    const int rows = static_cast<int>(mask.rows()), cols = static_cast<int>(mask.cols());
    std::vector<int> label(static_cast<std::size_t>(rows) * cols, -1);
    auto at = [&](int r, int c) -> int& { return label[static_cast<std::size_t>(r) * cols + c]; };
    auto on = [&](int r, int c) { return r >= 0 && r < rows && c >= 0 && c < cols && mask(r, c); };

    std::vector<Contour> out;
    for (int r0 = 0; r0 < rows; ++r0) {
        for (int c0 = 0; c0 < cols; ++c0) {
            if (!mask(r0, c0) || at(r0, c0) >= 0) continue;
            const int id = static_cast<int>(out.size());
            std::vector<std::pair<int, int>> cells;
            std::queue<std::pair<int, int>> q;
            q.emplace(r0, c0);
            at(r0, c0) = id;
            while (!q.empty()) {
                auto [r, c] = q.front();
                q.pop();
                cells.emplace_back(r, c);
                for (auto [dr, dc] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}}) {
                    if (on(r + dr, c + dc) && at(r + dr, c + dc) < 0) {
                        at(r + dr, c + dc) = id;
                        q.emplace(r + dr, c + dc);
                    }
                }
            }
            // Directed boundary edges, clockwise on screen (x = column, y = row).
            std::multimap<std::pair<int, int>, std::pair<int, int>> edges;
            for (auto [r, c] : cells) {
                if (!on(r - 1, c)) edges.emplace(std::pair{c, r}, std::pair{c + 1, r});
                if (!on(r, c + 1)) edges.emplace(std::pair{c + 1, r}, std::pair{c + 1, r + 1});
                if (!on(r + 1, c)) edges.emplace(std::pair{c + 1, r + 1}, std::pair{c, r + 1});
                if (!on(r, c - 1)) edges.emplace(std::pair{c, r + 1}, std::pair{c, r});
            }
            Contour contour;
            contour.cells = cells.size();
            while (!edges.empty()) {
                auto it = edges.begin();
                const auto first = it->first;
                std::vector<std::pair<int, int>> loop{first};
                auto cur = it->second;
                edges.erase(it);
                while (cur != first) {
                    loop.push_back(cur);
                    auto next = edges.find(cur);
                    cur = next->second;
                    edges.erase(next);
                }
                // Drop collinear vertices.
                std::vector<std::pair<int, int>> simple;
                const std::size_t m = loop.size();
                for (std::size_t i = 0; i < m; ++i) {
                    const auto& a = loop[(i + m - 1) % m];
                    const auto& b = loop[i];
                    const auto& c = loop[(i + 1) % m];
                    const bool collinear = (b.first - a.first) * (c.second - b.second) == (b.second - a.second) * (c.first - b.first);
                    if (!collinear) simple.push_back(b);
                }
                contour.loops.push_back(std::move(simple));
            }
            out.push_back(std::move(contour));
        }
    }
    return out;
}

std::string decomposition_svg(const descriptives::Decomposition& d, std::string_view title) {
    const double W = 760, ph = 150, top = 40, gap = 18, left = 80;
    Svg svg(W, top + 4 * ph + 3 * gap + 50);
    svg.text(W / 2, 24, title, "font-size=\"15\" text-anchor=\"middle\"");
    const double x0 = decimal_year(d.start);
    const double x1 = decimal_year(d.start.plus_months(static_cast<long>(d.observed.size()) - 1));
    const std::array<std::pair<std::string_view, std::vector<std::optional<double>>>, 4> panels = {{
        {"observed", wrap(d.observed)}, {"trend", d.trend}, {"seasonal", wrap(d.seasonal)}, {"random", d.remainder}}};
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const auto [lo, hi] = range_of(panels[i].second);
        Panel p{left, top + i * (ph + gap), W - left - 20, ph, x0, std::max(x1, x0 + 1.0 / 12), lo, hi};
        axes(svg, p, panels[i].first, i + 1 == panels.size());
        svg.raw(fmt::format("<g class=\"panel\" data-component=\"{}\">\n", panels[i].first));
        series_lines(svg, p, d.start, panels[i].second, "stroke=\"#000000\" stroke-width=\"1\"");
        svg.raw("</g>\n");
    }
    svg.text(W / 2, top + 4 * ph + 3 * gap + 38, "Time", "font-size=\"11\" text-anchor=\"middle\"");
    return svg.str();
}

std::string cross_wavelet_svg(const wavelet::CrossWaveletSpectrum& s, std::string_view title) {
    const auto J = static_cast<int>(s.n_scales());
    const auto N = static_cast<int>(s.n_times());
    const double W = 860, H = 480, left = 70, top = 40, pw = 680, ph = 380;
    const double cw = pw / std::max(N, 1), ch = ph / std::max(J, 1);
    Svg svg(W, H);
    svg.text(left + pw / 2, 24, title, "font-size=\"15\" text-anchor=\"middle\"");

    // Heatmap of log2 power, quantised and run-length merged along time.
    constexpr int levels = 32;
    double lo = INFINITY, hi = -INFINITY;
    for (int j = 0; j < J; ++j)
        for (int t = 0; t < N; ++t)
            if (s.power(j, t) > 0) lo = std::min(lo, std::log2(s.power(j, t))), hi = std::max(hi, std::log2(s.power(j, t)));
    if (!(lo < hi)) lo = hi - 1.0;
    auto bucket = [&](double v) {
        if (!(v > 0)) return 0;
        return std::clamp(static_cast<int>((std::log2(v) - lo) / (hi - lo) * levels), 0, levels - 1);
    };
    svg.raw("<g class=\"heatmap\" shape-rendering=\"crispEdges\">\n");
    for (int j = 0; j < J; ++j) {
        int t = 0;
        while (t < N) {
            const int b = bucket(s.power(j, t));
            int e = t + 1;
            while (e < N && bucket(s.power(j, e)) == b) ++e;
            // Snap both edges so neighbouring runs share them exactly.
            const double xa = std::round((left + t * cw) * 100) / 100, xb = std::round((left + e * cw) * 100) / 100;
            const double ya = std::round((top + j * ch) * 100) / 100, yb = std::round((top + (j + 1) * ch) * 100) / 100;
            svg.rect(xa, ya, xb - xa, yb - ya, fmt::format("fill=\"{}\"", palette((b + 0.5) / levels)));
            t = e;
        }
    }
    svg.raw("</g>\n");

    // Cone of influence: shade periods beyond the cone.
    if (N > 0 && J > 0) {
        const double p0 = s.periods.front();
        const double dj = J > 1 ? std::log2(s.periods[1] / p0) : 1.0;
        std::string d = fmt::format("M{} {}", num(left), num(top + ph));
        for (int t = 0; t < N; ++t) {
            double row = s.coi[t] > 0 ? std::log2(s.coi[t] / p0) / dj + 0.5 : 0.0;
            row = std::clamp(row, 0.0, static_cast<double>(J));
            d += fmt::format(" L{} {}", num(left + (t + 0.5) * cw), num(top + row * ch));
        }
        d += fmt::format(" L{} {} Z", num(left + pw), num(top + ph));
        svg.raw(fmt::format("<path class=\"coi\" d=\"{}\" fill=\"#ffffff\" fill-opacity=\"0.55\" stroke=\"#ffffff\" "
                            "stroke-width=\"1\"/>\n",
                            d));
    }

    // 5% significance outlines.
    for (const auto& c : mask_contours(s.signif))
        svg.raw(fmt::format("<path class=\"signif-contour\" d=\"{}\" fill=\"none\" stroke=\"#000000\" "
                            "stroke-width=\"1.5\" fill-rule=\"evenodd\"/>\n",
                            loops_path(c, left, top, cw, ch)));

    // Axes: time along x, period (log2) down the y axis.
    svg.rect(left, top, pw, ph, "fill=\"none\" stroke=\"#000000\"");
    if (N > 0) {
        const double y0 = decimal_year(s.start);
        const Panel px{left, top, pw, ph, y0 - 0.5 / 12, y0 + (N - 0.5) / 12.0, 0, 1};
        for (double v : nice_ticks(px.xmin, px.xmax, 8)) {
            svg.line(px.px(v), top + ph, px.px(v), top + ph + 4, "stroke=\"#000000\"");
            svg.text(px.px(v), top + ph + 16, tick_label(v), "font-size=\"10\" text-anchor=\"middle\"");
        }
    }
    if (J > 0) {
        const double p0 = s.periods.front();
        const double dj = J > 1 ? std::log2(s.periods[1] / p0) : 1.0;
        for (double per = std::exp2(std::ceil(std::log2(p0))); per <= s.periods.back(); per *= 2) {
            const double y = top + (std::log2(per / p0) / dj + 0.5) * ch;
            svg.line(left - 4, y, left, y, "stroke=\"#000000\"");
            svg.text(left - 6, y + 4, tick_label(per), "font-size=\"10\" text-anchor=\"end\"");
        }
    }
    svg.text(left - 48, top + ph / 2, "Period (months)",
             fmt::format("font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 {} {})\"", num(left - 48),
                         num(top + ph / 2)));
    svg.text(left + pw / 2, top + ph + 34, "Time", "font-size=\"11\" text-anchor=\"middle\"");

    // Colour bar.
    const double bx = left + pw + 30, bw = 16;
    for (int b = 0; b < levels; ++b)
        svg.rect(bx, top + ph - (b + 1) * ph / levels, bw, ph / levels, fmt::format("fill=\"{}\"", palette((b + 0.5) / levels)));
    svg.rect(bx, top, bw, ph, "fill=\"none\" stroke=\"#000000\"");
    const Panel bar{bx, top, bw, ph, 0, 1, lo, hi};
    for (double v : nice_ticks(lo, hi, 6)) {
        svg.line(bx + bw, bar.py(v), bx + bw + 4, bar.py(v), "stroke=\"#000000\"");
        svg.text(bx + bw + 6, bar.py(v) + 4, tick_label(v), "font-size=\"10\"");
    }
    svg.text(bx + bw / 2, top - 8, "log2 power", "font-size=\"10\" text-anchor=\"middle\"");
    return svg.str();
}

std::string efp_svg(const std::vector<EfpEntry>& entries, const MonthDate& start, double alpha, std::string_view title) {
    const double W = 860, H = 560, top = 50, left = 70, gapx = 70, gapy = 60;
    const double pw = (W - left - gapx - 20) / 2, ph = (H - top - gapy - 40) / 2;
    Svg svg(W, H);
    svg.text(W / 2, 24, title, "font-size=\"15\" text-anchor=\"middle\"");
    const double y0 = decimal_year(start);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        const auto& p = e.process;
        const double span = static_cast<double>(p.n) / 12.0;
        std::vector<double> bound(p.path.size());
        double lo = 0, hi = 0;
        for (std::size_t k = 0; k < p.path.size(); ++k) {
            bound[k] = boundary(p, k, alpha);
            lo = std::min({lo, p.path[k], -bound[k]});
            hi = std::max({hi, p.path[k], bound[k]});
        }
        const double pad = 0.05 * (hi - lo + 1e-12);
        Panel panel{left + (i % 2) * (pw + gapx), top + (i / 2) * (ph + gapy), pw, ph, y0, y0 + span, lo - pad, hi + pad};
        svg.raw(fmt::format("<g class=\"efp-panel\" data-kind=\"{}\">\n", breaks::to_string(p.kind)));
        axes(svg, panel, "Empirical fluctuation process", true);
        svg.text(panel.x + pw / 2, panel.y - 8,
                 fmt::format("{} test (p = {})", breaks::to_string(p.kind),
                             e.test.p_is_table_floor ? fmt::format("{:.2f}", e.test.p_value) : format_pvalue(e.test.p_value)),
                 "font-size=\"12\" text-anchor=\"middle\"");
        svg.line(panel.x, panel.py(0), panel.x + pw, panel.py(0), "stroke=\"#808080\" stroke-width=\"0.8\"");
        std::vector<std::pair<double, double>> path, up, down;
        for (std::size_t k = 0; k < p.path.size(); ++k) {
            const double x = panel.px(y0 + p.time(k) * span);
            path.emplace_back(x, panel.py(p.path[k]));
            up.emplace_back(x, panel.py(bound[k]));
            down.emplace_back(x, panel.py(-bound[k]));
        }
        svg.polyline(up, "class=\"boundary\" stroke=\"#ff0000\" stroke-width=\"1\"");
        svg.polyline(down, "class=\"boundary\" stroke=\"#ff0000\" stroke-width=\"1\"");
        svg.polyline(path, "class=\"process\" stroke=\"#000000\" stroke-width=\"1\"");
        svg.raw("</g>\n");
    }
    return svg.str();
}

std::string breakpoints_svg(const MonthlySeries& tm, const MonthlySeries& pt, const breaks::BreakpointSet* tb,
                            const breaks::BreakpointSet* pb, std::string_view title) {
    const double W = 860, H = 440, left = 80, top = 40, pw = 740, ph = 340;
    Svg svg(W, H);
    svg.text(left + pw / 2, 24, title, "font-size=\"15\" text-anchor=\"middle\"");
    double lo = INFINITY, hi = -INFINITY;
    for (const auto* s : {&tm, &pt})
        for (double v : s->values()) lo = std::min(lo, v), hi = std::max(hi, v);
    const double pad = 0.06 * (hi - lo + 1.0);
    const double x0 = decimal_year(std::min(tm.start(), pt.start()));
    const double x1 = decimal_year(std::max(tm.end(), pt.end()));
    Panel p{left, top, pw, ph, x0, std::max(x1, x0 + 1.0 / 12), lo - 2 * pad, hi + pad};
    axes(svg, p, "Count", true);
    svg.text(left + pw / 2, top + ph + 34, "Time", "font-size=\"11\" text-anchor=\"middle\"");

    struct Style {
        const MonthlySeries* series;
        const breaks::BreakpointSet* bps;
        std::string_view colour, name;
        double whisker;  // y position of the CI whisker, in data units
    };
    const std::array<Style, 2> styles = {{{&tm, tb, "#000000", "Trademarks", lo - 1.4 * pad},
                                          {&pt, pb, "#ff0000", "Patents", lo - 0.7 * pad}}};
    for (const auto& st : styles) {
        svg.raw(fmt::format("<g class=\"series\" data-series=\"{}\">\n", st.name));
        series_lines(svg, p, st.series->start(), wrap(st.series->values()),
                     fmt::format("stroke=\"{}\" stroke-width=\"1\"", st.colour));
        if (st.bps != nullptr) {
            for (const auto& b : st.bps->breaks) {
                const double x = p.px(decimal_year(b.date));
                svg.line(x, p.y, x, p.y + p.h,
                         fmt::format("class=\"break\" stroke=\"{}\" stroke-width=\"1\" stroke-dasharray=\"4 3\"", st.colour));
                const double xl = p.px(decimal_year(b.ci_low)), xh = p.px(decimal_year(b.ci_high)), y = p.py(st.whisker);
                svg.raw(fmt::format("<g class=\"ci\" stroke=\"{}\" stroke-width=\"1.5\">", st.colour));
                svg.raw(fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>", num(xl), num(y), num(xh), num(y)));
                svg.raw(fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>", num(xl), num(y - 4), num(xl), num(y + 4)));
                svg.raw(fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>", num(xh), num(y - 4), num(xh), num(y + 4)));
                svg.raw("</g>\n");
            }
        }
        svg.raw("</g>\n");
    }
    // Legend.
    for (std::size_t i = 0; i < styles.size(); ++i) {
        const double y = top + 16 + 16 * i;
        svg.line(left + 12, y - 4, left + 36, y - 4, fmt::format("stroke=\"{}\" stroke-width=\"2\"", styles[i].colour));
        svg.text(left + 42, y, styles[i].name, "font-size=\"11\"");
    }
    return svg.str();
}

std::vector<std::filesystem::path> emit_plots(const PipelineReport& r, const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> written;
    auto put = [&](const std::string& name, const std::string& content) {
        write_file(dir / name, content);
        written.push_back(dir / name);
    };
    if (r.decomposition[0]) put("fig1_decomposition_trademarks.svg", decomposition_svg(*r.decomposition[0], "Timeseries decomposition of Trademarks"));
    if (r.decomposition[1]) put("fig2_decomposition_patents.svg", decomposition_svg(*r.decomposition[1], "Timeseries decomposition of Patents"));
    if (r.xwt) put("fig3_cross_wavelet.svg", cross_wavelet_svg(*r.xwt, "Cross-wavelet power of Trademarks and Patents"));
    for (int s = 0; s < 2; ++s) {
        if (r.efp[s].empty() || !r.cleaned[s]) continue;
        const std::string lower = s == 0 ? "trademarks" : "patents";
        put(fmt::format("fig4_efp_{}.svg", lower),
            efp_svg(r.efp[s], r.cleaned[s]->start(), r.config.alpha,
                    fmt::format("Existence of structural breakpoints for {}", kSeriesNames[s])));
    }
    if (r.cleaned[0] && r.cleaned[1])
        put("fig5_breakpoints.svg",
            breakpoints_svg(*r.cleaned[0], *r.cleaned[1], r.breakpoints[0] ? &*r.breakpoints[0] : nullptr,
                            r.breakpoints[1] ? &*r.breakpoints[1] : nullptr,
                            "Structural breakpoints with confidence intervals"));
    return written;
}

}  // namespace ipseries::report
