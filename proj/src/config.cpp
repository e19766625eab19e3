#include "nid/config.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace nid {

namespace {

const std::set<std::string> kKnown = {
    "input.mode",          "corpus.path",         "corpus.stopwords",      "corpus.stem_map",
    "representations.path", "representations.sources", "lda.K",           "lda.alpha",
    "lda.beta",            "lda.iterations",      "signals.window",        "signals.per_source",
    "trend.n",             "trend.order",         "trend.order_policy",    "detect.tau",
    "detect.floor",        "detect.sliding_w",    "detect.min_run",        "detect.baseline_cutoff",
    "events",              "run.seed",            "synth.n_docs",          "synth.K",
    "synth.base_drift",    "synth.noise",         "synth.persistence",     "synth.salience_period",
    "synth.quiet_salience", "synth.catastrophe_spread", "synth.ramp",      "synth.transient_gain",
    "synth.event_start",   "synth.event_length",  "synth.event_strength",  "synth.start_date",
    "synth.source",
};

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double to_real(const std::string& key, const std::string& v)
{
    char* end = nullptr;
    errno = 0;
    double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
        throw UsageError("config " + key + ": expected a number, got '" + v + "'");
    return d;
}

long long to_int(const std::string& key, const std::string& v)
{
    char* end = nullptr;
    errno = 0;
    long long d = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
        throw UsageError("config " + key + ": expected an integer, got '" + v + "'");
    return d;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw UsageError("config " + key + ": expected true/false, got '" + v + "'");
}

// Shortest text that reads back to the same double.
std::string str(double v)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

} // namespace

Config Config::parse(const std::string& text, const std::string& origin)
{
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        auto key = trim(t.substr(0, eq));
        if (!kKnown.count(key))
            throw UsageError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        c.values_[key] = trim(t.substr(eq + 1));
    }
    return c;
}

Config Config::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    auto c = parse(ss.str(), path.string());
    c.base_dir = path.parent_path();
    return c;
}

const std::string& Config::get(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end())
        throw UsageError("config key '" + key + "' is required");
    return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const
{
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string Config::dump() const
{
    std::string out;
    for (const auto& [k, v] : values_)
        out += k + " = " + v + "\n";
    return out;
}

RunConfig RunConfig::from(const Config& c)
{
    RunConfig r;
    auto path = [&](const std::string& key) -> std::filesystem::path {
        if (!c.has(key) || c.get(key).empty())
            return {};
        std::filesystem::path p = c.get(key);
        return p.is_relative() && !c.base_dir.empty() ? c.base_dir / p : p;
    };
    auto real = [&](const std::string& key, double def) { return c.has(key) ? to_real(key, c.get(key)) : def; };
    auto integer = [&](const std::string& key, long long def) {
        return c.has(key) ? to_int(key, c.get(key)) : def;
    };

    r.corpus = path("corpus.path");
    r.stopwords = path("corpus.stopwords");
    r.stem_map = path("corpus.stem_map");
    r.representations = path("representations.path");
    r.sources = path("representations.sources");

    auto mode = c.get_or("input.mode", !r.corpus.empty() ? "corpus" : !r.representations.empty() ? "representations" : "synth");
    if (mode == "corpus")
        r.mode = InputMode::corpus;
    else if (mode == "representations")
        r.mode = InputMode::representations;
    else if (mode == "synth")
        r.mode = InputMode::synth;
    else
        throw UsageError("config input.mode must be corpus, representations or synth");

    r.seed = static_cast<std::uint64_t>(integer("run.seed", 1));

    r.lda = LdaConfig::with_topics(static_cast<int>(integer("lda.K", 20)));
    r.lda.alpha = real("lda.alpha", r.lda.alpha);
    r.lda.beta = real("lda.beta", r.lda.beta);
    r.lda.iterations = static_cast<int>(integer("lda.iterations", r.lda.iterations));

    r.window.w = static_cast<int>(integer("signals.window", 7));
    r.per_source = c.has("signals.per_source") ? to_bool("signals.per_source", c.get("signals.per_source")) : true;

    r.filter.n = static_cast<int>(integer("trend.n", 14));
    r.filter.order = static_cast<int>(integer("trend.order", 2));
    auto policy = c.get_or("trend.order_policy", "fixed");
    if (policy != "fixed" && policy != "select")
        throw UsageError("config trend.order_policy must be fixed or select");
    r.filter.select = policy == "select";

    r.detect.tau = real("detect.tau", r.detect.tau);
    r.detect.floor = real("detect.floor", r.detect.floor);
    r.detect.sliding_w = static_cast<int>(integer("detect.sliding_w", r.detect.sliding_w));
    r.detect.min_run = static_cast<int>(integer("detect.min_run", r.detect.min_run));
    if (c.has("detect.baseline_cutoff") && !c.get("detect.baseline_cutoff").empty()) {
        Date d;
        if (!try_parse_date(c.get("detect.baseline_cutoff"), d))
            throw UsageError("config detect.baseline_cutoff: invalid date");
        r.baseline_cutoff = d;
    }
    r.events = parse_events(c.get_or("events", ""));
    check_events_sorted(r.events);

    auto& s = r.synth;
    s.n_docs = static_cast<std::size_t>(integer("synth.n_docs", static_cast<long long>(s.n_docs)));
    s.K = static_cast<int>(integer("synth.K", s.K));
    s.base_drift = real("synth.base_drift", s.base_drift);
    s.noise = real("synth.noise", s.noise);
    s.persistence = real("synth.persistence", s.persistence);
    s.salience_period = static_cast<int>(integer("synth.salience_period", s.salience_period));
    s.quiet_salience = real("synth.quiet_salience", s.quiet_salience);
    s.catastrophe_spread = real("synth.catastrophe_spread", s.catastrophe_spread);
    s.ramp = real("synth.ramp", s.ramp);
    s.transient_gain = real("synth.transient_gain", s.transient_gain);
    if (c.has("synth.start_date")) {
        Date d;
        if (!try_parse_date(c.get("synth.start_date"), d))
            throw UsageError("config synth.start_date: invalid date");
        s.start_date = d;
    }
    s.source = c.get_or("synth.source", s.source);
    if (c.has("synth.event_start") || c.has("synth.event_length")) {
        EventInjection ev;
        auto start = integer("synth.event_start", 0), length = integer("synth.event_length", 0);
        if (start < 0 || length < 0)
            throw UsageError("config synth.event_start/event_length must be non-negative");
        ev.start = static_cast<std::size_t>(start);
        ev.length = static_cast<std::size_t>(length);
        ev.strength = real("synth.event_strength", ev.strength);
        s.event = ev;
    }
    r.set_seed(r.seed);
    return r;
}

void RunConfig::set_seed(std::uint64_t s)
{
    seed = s;
    lda.seed = s;
    synth.seed = s;
}

std::optional<Date> RunConfig::resolved_cutoff() const
{
    if (baseline_cutoff)
        return baseline_cutoff;
    if (!events.empty())
        return events.front().date;
    return std::nullopt;
}

Config RunConfig::to_config() const
{
    Config c;
    c.set("input.mode", mode == InputMode::corpus ? "corpus" : mode == InputMode::representations ? "representations" : "synth");
    if (!corpus.empty())
        c.set("corpus.path", corpus.string());
    if (!stopwords.empty())
        c.set("corpus.stopwords", stopwords.string());
    if (!stem_map.empty())
        c.set("corpus.stem_map", stem_map.string());
    if (!representations.empty())
        c.set("representations.path", representations.string());
    if (!sources.empty())
        c.set("representations.sources", sources.string());
    c.set("run.seed", std::to_string(seed));
    c.set("lda.K", std::to_string(lda.K));
    c.set("lda.alpha", str(lda.alpha));
    c.set("lda.beta", str(lda.beta));
    c.set("lda.iterations", std::to_string(lda.iterations));
    c.set("signals.window", std::to_string(window.w));
    c.set("signals.per_source", per_source ? "true" : "false");
    c.set("trend.n", std::to_string(filter.n));
    c.set("trend.order", std::to_string(filter.order));
    c.set("trend.order_policy", filter.select ? "select" : "fixed");
    c.set("detect.tau", str(detect.tau));
    c.set("detect.floor", str(detect.floor));
    c.set("detect.sliding_w", std::to_string(detect.sliding_w));
    c.set("detect.min_run", std::to_string(detect.min_run));
    if (baseline_cutoff)
        c.set("detect.baseline_cutoff", format_date(*baseline_cutoff));
    std::string ev;
    for (const auto& e : events)
        ev += (ev.empty() ? "" : ", ") + e.name + ":" + format_date(e.date);
    c.set("events", ev);
    if (mode == InputMode::synth) {
        c.set("synth.n_docs", std::to_string(synth.n_docs));
        c.set("synth.K", std::to_string(synth.K));
        c.set("synth.base_drift", str(synth.base_drift));
        c.set("synth.noise", str(synth.noise));
        c.set("synth.persistence", str(synth.persistence));
        c.set("synth.salience_period", std::to_string(synth.salience_period));
        c.set("synth.quiet_salience", str(synth.quiet_salience));
        c.set("synth.catastrophe_spread", str(synth.catastrophe_spread));
        c.set("synth.ramp", str(synth.ramp));
        c.set("synth.transient_gain", str(synth.transient_gain));
        c.set("synth.start_date", format_date(synth.start_date));
        c.set("synth.source", synth.source);
        if (synth.event) {
            c.set("synth.event_start", std::to_string(synth.event->start));
            c.set("synth.event_length", std::to_string(synth.event->length));
            c.set("synth.event_strength", str(synth.event->strength));
        }
    }
    return c;
}

} // namespace nid
