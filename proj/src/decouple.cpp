#include "nid/decouple.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nid/csv.hpp"

namespace nid {

SlopeFit ols_fit(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw DataError("ols: length mismatch");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (is_missing(x[i]) || is_missing(y[i]))
            continue;
        xs.push_back(x[i]);
        ys.push_back(y[i]);
    }
    const std::size_t n = xs.size();
    if (n < 3)
        throw DataError("ols: " + std::to_string(n) + " complete pairs, need at least 3");

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    // Rounding in the means leaves tiny residual variance for constant data.
    const auto [xlo, xhi] = std::minmax_element(xs.begin(), xs.end());
    if (*xlo == *xhi || !(sxx > 0))
        throw NumericalError("ols: zero variance in x");
    const auto [ylo, yhi] = std::minmax_element(ys.begin(), ys.end());
    if (*ylo == *yhi)
        sxy = syy = 0;

    SlopeFit f;
    f.n_points = n;
    f.beta1 = sxy / sxx;
    f.beta0 = my - f.beta1 * mx;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - f.beta0 - f.beta1 * xs[i];
        sse += r * r;
    }
    f.stderr1 = std::sqrt(sse / (n - 2) / sxx);
    f.r2 = syy > 0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    return f;
}

void DetectConfig::validate() const
{
    if (sliding_w < 3)
        throw UsageError("detect sliding_w must be >= 3");
    if (min_run < 1)
        throw UsageError("detect min_run must be >= 1");
    if (!std::isfinite(tau) || !std::isfinite(floor))
        throw UsageError("detect tau and floor must be finite");
}

SlopeFit baseline_fit(const SignalSeries& s, Date cutoff)
{
    std::vector<double> x, y;
    for (std::size_t j = 0; j < s.size() && s.timestamps[j] < cutoff; ++j) {
        x.push_back(s.novelty[j]);
        y.push_back(s.resonance[j]);
    }
    return ols_fit(x, y);
}

BaselineSummary baseline_slopes(const std::map<std::string, SignalSeries>& signals, Date cutoff)
{
    BaselineSummary out;
    for (const auto& [name, s] : signals) {
        try {
            out.per_source[name] = baseline_fit(s, cutoff);
        } catch (const DataError& e) {
            out.excluded.push_back(name + ": " + e.what());
        }
    }
    if (out.per_source.empty())
        throw DataError("no source has enough data before " + format_date(cutoff));
    double sum = 0;
    for (const auto& [_, f] : out.per_source)
        sum += f.beta1;
    const double k = static_cast<double>(out.per_source.size());
    out.mean = sum / k;
    double ss = 0;
    for (const auto& [_, f] : out.per_source)
        ss += (f.beta1 - out.mean) * (f.beta1 - out.mean);
    out.sd = k > 1 ? std::sqrt(ss / (k - 1)) : 0.0;
    return out;
}

void check_events_sorted(const std::vector<EventSpec>& events)
{
    for (std::size_t i = 1; i < events.size(); ++i)
        if (!(events[i - 1].date < events[i].date))
            throw UsageError("event dates must be strictly increasing ('" + events[i - 1].name + "' then '" +
                             events[i].name + "')");
}

namespace {

WindowFit fit_range(const SignalSeries& s, std::size_t b, std::size_t e, std::string label)
{
    WindowFit w;
    w.label = std::move(label);
    w.begin = b;
    w.end = e;
    if (b < e) {
        w.start_date = s.timestamps[b];
        w.end_date = s.timestamps[e - 1];
    }
    try {
        w.fit = ols_fit(std::span<const double>(s.novelty).subspan(b, e - b),
                        std::span<const double>(s.resonance).subspan(b, e - b));
    } catch (const std::exception& ex) {
        w.reason = b < e ? ex.what() : "empty window";
    }
    return w;
}

} // namespace

std::vector<WindowFit> event_window_slopes(const SignalSeries& s, const std::vector<EventSpec>& events)
{
    check_events_sorted(events);
    std::vector<WindowFit> out;
    std::size_t b = 0;
    for (std::size_t k = 0; k <= events.size(); ++k) {
        std::size_t e = s.size();
        if (k < events.size())
            e = static_cast<std::size_t>(
                std::lower_bound(s.timestamps.begin() + b, s.timestamps.end(), events[k].date) -
                s.timestamps.begin());
        std::string label = k == 0 ? "→" + (events.empty() ? std::string("") : events[0].name)
                                   : events[k - 1].name + "→" + (k < events.size() ? events[k].name : "");
        if (events.empty())
            label = "all";
        out.push_back(fit_range(s, b, e, std::move(label)));
        b = e;
    }
    return out;
}

void score_windows(std::vector<WindowFit>& windows, const SlopeFit& baseline, const DetectConfig& cfg)
{
    for (auto& w : windows) {
        if (!w.fit) {
            w.score = kMissing;
            w.verdict = "unfit";
            continue;
        }
        w.score = w.fit->beta1 / baseline.beta1;
        w.verdict = (w.score < cfg.tau && baseline.beta1 > cfg.floor) ? "decoupled" : "coupled";
    }
}

DecouplingReport detect(const SignalSeries& s, Date baseline_cutoff, const DetectConfig& cfg)
{
    cfg.validate();
    DecouplingReport rep;
    rep.baseline = baseline_fit(s, baseline_cutoff);
    if (!(rep.baseline.beta1 > cfg.floor))
        throw NumericalError("no coupled baseline; NID undefined (baseline beta1 " + format_report(rep.baseline.beta1) +
                             " <= floor " + format_report(cfg.floor) + ")");

    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < s.size(); ++j)
        if (!is_missing(s.novelty[j]) && !is_missing(s.resonance[j]))
            idx.push_back(j);
    const auto sw = static_cast<std::size_t>(cfg.sliding_w);
    if (idx.size() >= sw) {
        for (std::size_t k = 0; k + sw <= idx.size(); ++k) {
            std::vector<double> x(sw), y(sw);
            for (std::size_t i = 0; i < sw; ++i) {
                x[i] = s.novelty[idx[k + i]];
                y[i] = s.resonance[idx[k + i]];
            }
            WindowFit w;
            w.begin = idx[k];
            w.end = idx[k + sw - 1] + 1;
            w.label = std::to_string(w.begin) + "-" + std::to_string(w.end - 1);
            w.start_date = s.timestamps[w.begin];
            w.end_date = s.timestamps[w.end - 1];
            try {
                w.fit = ols_fit(x, y);
            } catch (const std::exception& ex) {
                w.reason = ex.what();
            }
            rep.windows.push_back(std::move(w));
        }
    }
    score_windows(rep.windows, rep.baseline, cfg);

    const auto min_run = static_cast<std::size_t>(cfg.min_run);
    std::size_t run = 0;
    for (std::size_t k = 0; k <= rep.windows.size(); ++k) {
        if (k < rep.windows.size() && rep.windows[k].verdict == "decoupled") {
            ++run;
            continue;
        }
        if (run >= min_run) {
            Episode ep;
            const auto& first = rep.windows[k - run];
            const auto& last = rep.windows[k - 1];
            ep.onset_index = first.begin;
            ep.end_index = last.end - 1;
            ep.onset_date = *first.start_date;
            ep.end_date = *last.end_date;
            ep.n_windows = run;
            ep.min_score = first.score;
            for (std::size_t i = k - run; i < k; ++i)
                ep.min_score = std::min(ep.min_score, rep.windows[i].score);
            rep.episodes.push_back(ep);
        }
        run = 0;
    }
    return rep;
}

void write_slope_report(const std::filesystem::path& path, const std::vector<WindowFit>& windows)
{
    std::ofstream os(path);
    if (!os)
        throw DataError("cannot write " + path.string());
    csv::write_row(os, {"window_label", "start_date", "end_date", "beta0", "beta1", "stderr1", "r2", "n_points",
                        "score", "verdict"});
    for (const auto& w : windows) {
        csv::Row row{w.label, w.start_date ? format_date(*w.start_date) : "",
                     w.end_date ? format_date(*w.end_date) : ""};
        if (w.fit) {
            row.insert(row.end(), {format_report(w.fit->beta0), format_report(w.fit->beta1),
                                   format_report(w.fit->stderr1), format_report(w.fit->r2),
                                   std::to_string(w.fit->n_points)});
        } else {
            row.insert(row.end(), {"", "", "", "", "0"});
        }
        row.push_back(format_report(w.score));
        row.push_back(w.fit ? w.verdict : (w.verdict.empty() ? "unfit" : w.verdict) + ": " + w.reason);
        csv::write_row(os, row);
    }
}

void write_episodes(const std::filesystem::path& path, const std::vector<Episode>& episodes)
{
    std::ofstream os(path);
    if (!os)
        throw DataError("cannot write " + path.string());
    csv::write_row(os, {"onset_date", "end_date", "min_score", "n_windows"});
    for (const auto& e : episodes)
        csv::write_row(os, {format_date(e.onset_date), format_date(e.end_date), format_report(e.min_score),
                            std::to_string(e.n_windows)});
}

std::vector<EventSpec> parse_events(const std::string& spec)
{
    std::vector<EventSpec> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos)
            continue;
        auto e = item.find_last_not_of(" \t");
        item = item.substr(b, e - b + 1);
        auto colon = item.rfind(':');
        if (colon == std::string::npos || colon == 0)
            throw UsageError("event '" + item + "' must look like Name:YYYY-MM-DD");
        Date d;
        if (!try_parse_date(item.substr(colon + 1), d))
            throw UsageError("event '" + item + "' has an invalid date");
        out.push_back({item.substr(0, colon), d});
    }
    return out;
}

} // namespace nid
