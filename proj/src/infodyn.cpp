#include "nid/infodyn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "nid/csv.hpp"

namespace nid {

double kld(std::span<const double> p, std::span<const double> q)
{
    if (p.size() != q.size())
        throw DataError("kld: length mismatch");
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0)
            continue;
        if (q[i] <= 0)
            throw NumericalError("kld: q vanishes where p is positive (infinite divergence)");
        s += p[i] * std::log2(p[i] / q[i]);
    }
    return std::max(s, 0.0);
}

double jsd(std::span<const double> p, std::span<const double> q)
{
    if (p.size() != q.size())
        throw DataError("jsd: length mismatch");
    // Per-component form keeps jsd(p,q) and jsd(q,p) bit-identical.
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = 0.5 * (p[i] + q[i]);
        double a = p[i] > 0 ? p[i] * std::log2(p[i] / m) : 0.0;
        double b = q[i] > 0 ? q[i] * std::log2(q[i] / m) : 0.0;
        s += 0.5 * (a + b);
    }
    return std::clamp(s, 0.0, 1.0);
}

double novelty(const Representations& series, std::size_t j, const WindowSpec& spec)
{
    if (spec.w < 1)
        throw UsageError("window w must be >= 1");
    if (j >= series.size())
        throw UsageError("novelty: index out of range");
    const auto w = static_cast<std::size_t>(spec.w);
    if (j < w)
        return kMissing;
    double s = 0;
    for (std::size_t d = 1; d <= w; ++d)
        s += jsd(series[j].p, series[j - d].p);
    return s / w;
}

double transience(const Representations& series, std::size_t j, const WindowSpec& spec)
{
    if (spec.w < 1)
        throw UsageError("window w must be >= 1");
    if (j >= series.size())
        throw UsageError("transience: index out of range");
    const auto w = static_cast<std::size_t>(spec.w);
    if (j + w >= series.size())
        return kMissing;
    double s = 0;
    for (std::size_t d = 1; d <= w; ++d)
        s += jsd(series[j].p, series[j + d].p);
    return s / w;
}

SignalSeries compute_signals(const Representations& series, const WindowSpec& spec)
{
    if (spec.w < 1)
        throw UsageError("window w must be >= 1");
    const std::size_t n = series.size();
    const auto w = static_cast<std::size_t>(spec.w);
    if (n < 2 * w + 1)
        throw DataError("series too short: " + std::to_string(n) + " documents, need at least 2w+1 = " +
                        std::to_string(2 * w + 1));
    for (const auto& r : series)
        if (r.p.size() != series.front().p.size())
            throw DataError("inconsistent dimension at doc '" + r.doc_id + "'");

    SignalSeries s;
    s.valid_begin = w;
    s.valid_end = n - w;
    s.novelty.assign(n, kMissing);
    s.transience.assign(n, kMissing);
    s.resonance.assign(n, kMissing);
    for (const auto& r : series) {
        s.doc_ids.push_back(r.doc_id);
        s.timestamps.push_back(r.timestamp);
    }
    for (std::size_t j = s.valid_begin; j < s.valid_end; ++j) {
        s.novelty[j] = novelty(series, j, spec);
        s.transience[j] = transience(series, j, spec);
        s.resonance[j] = s.novelty[j] - s.transience[j];
    }
    return s;
}

std::map<std::string, Representations> group_by_source(const Representations& reps, const SourceMap& sources,
                                                       bool per_source)
{
    std::map<std::string, Representations> out;
    for (const auto& r : reps) {
        if (!per_source) {
            out["all"].push_back(r);
            continue;
        }
        auto it = sources.find(r.doc_id);
        if (it == sources.end())
            throw DataError("no source recorded for doc '" + r.doc_id + "'");
        out[it->second].push_back(r);
    }
    return out;
}

void write_signals(const std::filesystem::path& path, const SignalSeries& s)
{
    std::ofstream os(path);
    if (!os)
        throw DataError("cannot write " + path.string());
    csv::write_row(os, {"doc_id", "date", "novelty", "transience", "resonance"});
    for (std::size_t j = 0; j < s.size(); ++j)
        csv::write_row(os, {s.doc_ids[j], format_date(s.timestamps[j]), format_exact(s.novelty[j]),
                            format_exact(s.transience[j]), format_exact(s.resonance[j])});
}

SignalSeries read_signals(const std::filesystem::path& path)
{
    auto t = csv::read(path);
    auto ci = csv::column(t, "doc_id", path), cd = csv::column(t, "date", path),
         cn = csv::column(t, "novelty", path), ct = csv::column(t, "transience", path),
         cr = csv::column(t, "resonance", path);
    auto num = [&](const std::string& f, const std::string& id) {
        if (f.empty())
            return kMissing;
        char* end = nullptr;
        double v = std::strtod(f.c_str(), &end);
        if (end != f.c_str() + f.size())
            throw DataError(path.string() + ": doc '" + id + "': invalid number '" + f + "'");
        return v;
    };
    SignalSeries s;
    s.source = path.stem().string();
    for (const auto& row : t.rows) {
        s.doc_ids.push_back(row[ci]);
        s.timestamps.push_back(parse_date(row[cd]));
        s.novelty.push_back(num(row[cn], row[ci]));
        s.transience.push_back(num(row[ct], row[ci]));
        s.resonance.push_back(num(row[cr], row[ci]));
    }
    auto complete = [&](std::size_t j) {
        return !is_missing(s.novelty[j]) && !is_missing(s.transience[j]) && !is_missing(s.resonance[j]);
    };
    std::size_t b = 0;
    while (b < s.size() && !complete(b))
        ++b;
    std::size_t e = s.size();
    while (e > b && !complete(e - 1))
        --e;
    s.valid_begin = b;
    s.valid_end = e;
    return s;
}

} // namespace nid
