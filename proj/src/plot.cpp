#include "nid/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

#include "nid/csv.hpp"
#include "nid/svg.hpp"

namespace nid {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

double parse_num(const std::string& s)
{
    if (s.empty())
        return kMissing;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() ? v : kMissing;
}

std::pair<double, double> range(const std::vector<double>& a, const std::vector<double>& b = {})
{
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto* v : {&a, &b})
        for (double x : *v)
            if (!is_missing(x)) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
    return {lo, hi};
}

void series_panel(svg::Canvas& c, double y0, const SignalSeries& s, const std::vector<double>& signal,
                  const std::vector<double>& trend, const std::vector<EventSpec>& events, const std::string& title,
                  const std::string& ylabel, const std::string& colour)
{
    auto [lo, hi] = range(signal, trend);
    auto f = svg::axes(c, 70, y0, 800, 190, 0, std::max<double>(1, s.size() - 1), lo, hi, title, "document index",
                       ylabel);
    for (std::size_t j = 0; j < s.size(); ++j)
        if (!is_missing(signal[j]))
            c.circle(f.px(j), f.py(signal[j]), 1.8, "#777", 0.6);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t j = 0; j < s.size(); ++j)
        if (!is_missing(trend[j]))
            pts.emplace_back(f.px(j), f.py(trend[j]));
    c.polyline(pts, colour, 2);
    for (const auto& e : events) {
        auto it = std::lower_bound(s.timestamps.begin(), s.timestamps.end(), e.date);
        if (it == s.timestamps.end())
            continue;
        double x = f.px(static_cast<double>(it - s.timestamps.begin()));
        c.line(x, y0, x, y0 + 190, "#555", 1, "4,3");
        c.text(x + 3, y0 + 12, e.name, 10, "start", "#333", "event");
    }
}

} // namespace

std::vector<SlopeRow> read_slope_rows(const fs::path& path)
{
    auto t = csv::read(path);
    auto cl = csv::column(t, "window_label", path), cs = csv::column(t, "start_date", path),
         ce = csv::column(t, "end_date", path), c0 = csv::column(t, "beta0", path),
         c1 = csv::column(t, "beta1", path);
    std::vector<SlopeRow> out;
    for (const auto& r : t.rows)
        out.push_back({r[cl], r[cs], r[ce], r[c0], r[c1]});
    return out;
}

void render_source_figure(const fs::path& path, const std::string& title, const SignalSeries& s,
                          const std::vector<double>& novelty_trend, const std::vector<double>& resonance_trend,
                          const std::vector<SlopeRow>& slopes, const std::vector<EventSpec>& events)
{
    if (novelty_trend.size() != s.size() || resonance_trend.size() != s.size())
        throw DataError("trend length does not match signals for '" + title + "'");
    svg::Canvas c(920, 800);
    c.text(460, 22, title, 15, "middle", "#000");
    series_panel(c, 50, s, s.novelty, novelty_trend, events, "Novelty", "novelty (bits)", "#1f77b4");
    series_panel(c, 300, s, s.resonance, resonance_trend, events, "Resonance", "resonance (bits)", "#d62728");

    auto [xlo, xhi] = range(s.novelty);
    auto [ylo, yhi] = range(s.resonance);
    auto f = svg::axes(c, 70, 550, 560, 200, xlo, xhi, ylo, yhi, "Event-window novelty x resonance slopes",
                       "novelty", "resonance");
    double ty = 560;
    for (std::size_t k = 0; k < slopes.size(); ++k) {
        const auto& w = slopes[k];
        const std::string colour = kPalette[k % std::size(kPalette)];
        Date from{}, to{};
        bool dated = try_parse_date(w.start_date, from) && try_parse_date(w.end_date, to);
        double wlo = std::numeric_limits<double>::infinity(), whi = -wlo;
        if (dated) {
            for (std::size_t j = 0; j < s.size(); ++j) {
                if (s.timestamps[j] < from || to < s.timestamps[j] || is_missing(s.novelty[j]) ||
                    is_missing(s.resonance[j]))
                    continue;
                c.circle(f.px(s.novelty[j]), f.py(s.resonance[j]), 2, colour, 0.55);
                wlo = std::min(wlo, s.novelty[j]);
                whi = std::max(whi, s.novelty[j]);
            }
        }
        double b0 = parse_num(w.beta0), b1 = parse_num(w.beta1);
        if (!is_missing(b0) && !is_missing(b1) && wlo < whi) {
            // Keep the fitted line inside the panel.
            if (b1 != 0) {
                double xa = (f.ymin - b0) / b1, xb = (f.ymax - b0) / b1;
                wlo = std::max(wlo, std::min(xa, xb));
                whi = std::min(whi, std::max(xa, xb));
            }
            if (wlo < whi)
                c.polyline({{f.px(wlo), f.py(b0 + b1 * wlo)}, {f.px(whi), f.py(b0 + b1 * whi)}}, colour, 2);
        }
        c.rect(650, ty - 8, 10, 10, colour);
        c.text(666, ty + 1, w.label + "  β1 = " + (w.beta1.empty() ? "n/a" : w.beta1), 11, "start", "#222",
               "slope");
        ty += 18;
    }

    std::ofstream os(path);
    if (!os)
        throw DataError("cannot write " + path.string());
    os << c.str();
}

void render_baseline_figure(const fs::path& path, const std::vector<BaselineRow>& rows, const std::string& mean,
                            const std::string& sd)
{
    const double h = 60 + 40.0 * std::max<std::size_t>(rows.size(), 1) + 60;
    svg::Canvas c(720, h);
    c.text(360, 24, "Baseline novelty x resonance slopes", 15, "middle", "#000");
    double hi = 0.0, lo = 0.0;
    for (const auto& r : rows) {
        double v = parse_num(r.beta1);
        if (!is_missing(v)) {
            hi = std::max(hi, v);
            lo = std::min(lo, v);
        }
    }
    if (hi - lo < 1e-12)
        hi = lo + 1;
    const double x0 = 180, w = 400;
    auto px = [&](double v) { return x0 + (v - lo) / (hi - lo) * w; };
    double y = 60;
    for (std::size_t k = 0; k < rows.size(); ++k, y += 40) {
        double v = parse_num(rows[k].beta1);
        c.text(x0 - 10, y + 18, rows[k].source, 12, "end");
        if (!is_missing(v)) {
            double a = px(std::min(0.0, v)), b = px(std::max(0.0, v));
            c.rect(a, y + 5, b - a, 20, kPalette[k % std::size(kPalette)]);
        }
        c.text(px(std::max(0.0, is_missing(v) ? 0.0 : v)) + 6, y + 19, "β1 = " + rows[k].beta1, 11, "start",
               "#222", "slope");
    }
    double m = parse_num(mean);
    if (!is_missing(m))
        c.line(px(m), 50, px(m), y + 5, "#000", 1.2, "5,3");
    c.line(px(0), 50, px(0), y + 5, "#444", 1);
    c.text(x0, y + 30, "M = " + mean + ", SD = " + sd, 12, "start", "#111", "summary");
    std::ofstream os(path);
    if (!os)
        throw DataError("cannot write " + path.string());
    os << c.str();
}

} // namespace nid
