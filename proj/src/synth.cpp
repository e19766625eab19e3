#include "nid/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>

#include "nid/csv.hpp"

namespace nid {

namespace {

void softmax(std::vector<double>& v)
{
    const double mx = *std::max_element(v.begin(), v.end());
    double s = 0;
    for (auto& x : v)
        s += (x = std::exp(x - mx));
    for (auto& x : v)
        x /= s;
}

// Trapezoid over the event: linear ramps of the given fraction at both ends.
double profile(std::size_t k, std::size_t L, double ramp)
{
    const double x = (k + 0.5) / static_cast<double>(L);
    if (ramp <= 0)
        return 1.0;
    return std::min({1.0, x / ramp, (1.0 - x) / ramp});
}

std::string doc_id(std::size_t j, std::size_t n)
{
    int width = std::max(5, static_cast<int>(std::to_string(n).size()));
    char buf[48];
    std::snprintf(buf, sizeof buf, "d%0*zu", std::min(width, 20), j);
    return buf;
}

} // namespace

void StreamConfig::validate() const
{
    if (n_docs < 1)
        throw UsageError("synth n_docs must be >= 1");
    if (K < 2)
        throw UsageError("synth K must be >= 2");
    if (!(base_drift >= 0) || !(noise >= 0) || !(quiet_salience >= 0) || !(catastrophe_spread >= 0) ||
        !(transient_gain >= 0))
        throw UsageError("synth scales must be non-negative");
    if (!(persistence >= 0 && persistence <= 1))
        throw UsageError("synth persistence must lie in [0, 1]");
    if (salience_period < 1)
        throw UsageError("synth salience_period must be >= 1");
    if (!(ramp >= 0 && ramp <= 0.5))
        throw UsageError("synth ramp must lie in [0, 0.5]");
    if (event) {
        if (event->length < 1 || event->start >= n_docs || event->length > n_docs - event->start)
            throw UsageError("synth event interval [" + std::to_string(event->start) + ", " +
                             std::to_string(event->start + event->length) + ") is outside [0, " +
                             std::to_string(n_docs) + ")");
        if (!(event->strength > 0 && event->strength <= 1))
            throw UsageError("synth event strength must lie in (0, 1]");
    }
}

Representations generate(const StreamConfig& cfg)
{
    cfg.validate();
    const std::size_t n = cfg.n_docs;
    const auto K = static_cast<std::size_t>(cfg.K);
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<double> catastrophe(K);
    for (auto& v : catastrophe)
        v = cfg.catastrophe_spread * normal(rng);
    softmax(catastrophe);

    std::vector<double> pull(n, 0.0), focus(n, 0.0);
    if (cfg.event) {
        const auto& ev = *cfg.event;
        for (std::size_t k = 0; k < ev.length; ++k) {
            const double f = profile(k, ev.length, cfg.ramp);
            pull[ev.start + k] = ev.strength * f;
            focus[ev.start + k] = f * f;
        }
    }

    Representations out(n);
    std::vector<double> z(K, 0.0), impulse(K), jitter(K), x(K);
    for (std::size_t j = 0; j < n; ++j) {
        const double salience = (j % cfg.salience_period == 0) ? 1.0 : cfg.quiet_salience;
        for (std::size_t i = 0; i < K; ++i)
            impulse[i] = cfg.base_drift * salience * normal(rng);
        for (std::size_t i = 0; i < K; ++i)
            jitter[i] = normal(rng);
        for (std::size_t i = 0; i < K; ++i)
            z[i] = cfg.persistence * z[i] + impulse[i];

        // During an event the persistent state gives way to one-off items while content is pulled
        // toward the catastrophe distribution.
        const double lam = pull[j], kap = focus[j];
        for (std::size_t i = 0; i < K; ++i)
            x[i] = (1 - kap) * z[i] + kap * cfg.transient_gain * impulse[i] + cfg.noise * (1 - lam) * jitter[i];
        softmax(x);

        auto& p = out[j].p;
        p.resize(K);
        double s = 0;
        for (std::size_t i = 0; i < K; ++i) {
            p[i] = std::max(lam * catastrophe[i] + (1 - lam) * x[i], std::numeric_limits<double>::min());
            s += p[i];
        }
        for (auto& v : p)
            v /= s;
        out[j].doc_id = doc_id(j, n);
        out[j].timestamp = cfg.start_date + std::chrono::days{static_cast<long>(j)};
    }
    return out;
}

std::vector<std::string> ground_truth(const StreamConfig& cfg)
{
    std::vector<std::string> labels(cfg.n_docs, "baseline");
    if (cfg.event)
        for (std::size_t j = cfg.event->start; j < cfg.event->start + cfg.event->length && j < cfg.n_docs; ++j)
            labels[j] = "event";
    return labels;
}

void write_labels(const std::filesystem::path& path, const std::vector<std::string>& labels)
{
    std::ofstream os(path);
    if (!os)
        throw DataError("cannot write " + path.string());
    csv::write_row(os, {"index", "label"});
    for (std::size_t j = 0; j < labels.size(); ++j)
        csv::write_row(os, {std::to_string(j), labels[j]});
}

} // namespace nid
