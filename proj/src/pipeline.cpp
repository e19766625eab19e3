#include "nid/pipeline.hpp"

#include <ctime>
#include <fstream>
#include <set>

#include "nid/csv.hpp"
#include "nid/ingest.hpp"
#include "nid/plot.hpp"

namespace nid {

namespace {

template <class Fn>
void run_stage(const std::string& name, Fn&& fn)
{
    try {
        fn();
    } catch (const UsageError& e) {
        throw UsageError("stage " + name + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError("stage " + name + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError("stage " + name + ": " + e.what());
    } catch (const fs::filesystem_error& e) {
        throw DataError("stage " + name + ": " + e.what());
    }
}

std::vector<std::pair<std::string, SignalSeries>> load_signals(const fs::path& dir)
{
    std::vector<std::pair<std::string, SignalSeries>> out;
    for (const auto& f : read_signal_index(dir)) {
        auto s = read_signals(f.path);
        s.source = f.source;
        out.emplace_back(f.source, std::move(s));
    }
    return out;
}

std::vector<double> read_trend_values(const fs::path& path, const SignalSeries& s)
{
    auto t = csv::read(path);
    auto ci = csv::column(t, "doc_id", path), ct = csv::column(t, "trend", path);
    if (t.rows.size() != s.size())
        throw DataError(path.string() + ": " + std::to_string(t.rows.size()) + " rows, signals have " +
                        std::to_string(s.size()));
    std::vector<double> out;
    for (std::size_t j = 0; j < t.rows.size(); ++j) {
        if (t.rows[j][ci] != s.doc_ids[j])
            throw DataError("misaligned inputs at doc_id '" + t.rows[j][ci] + "' (expected '" + s.doc_ids[j] +
                            "') in " + path.string());
        const auto& f = t.rows[j][ct];
        out.push_back(f.empty() ? kMissing : std::stod(f));
    }
    return out;
}

Date cutoff_or_end(const RunConfig& cfg, const SignalSeries& s, Warnings& warn)
{
    if (auto c = cfg.resolved_cutoff())
        return *c;
    warn.push_back("no baseline cutoff or events; baseline spans the whole series of '" + s.source + "'");
    return s.timestamps.back() + std::chrono::days{1};
}

} // namespace

std::string safe_name(const std::string& source)
{
    std::string out;
    for (unsigned char c : source)
        out += (std::isalnum(c) || c == '-' || c == '_' || c == '.') ? static_cast<char>(c) : '_';
    return out.empty() ? "_" : out;
}

std::vector<SignalFile> read_signal_index(const fs::path& dir)
{
    auto path = dir / "index.csv";
    auto t = csv::read(path);
    auto cs = csv::column(t, "source", path), cf = csv::column(t, "file", path);
    std::vector<SignalFile> out;
    for (const auto& r : t.rows)
        out.push_back({r[cs], dir / r[cf]});
    if (out.empty())
        throw DataError(path.string() + " lists no sources");
    return out;
}

void stage_ingest(const RunConfig& cfg, const fs::path& out, Warnings& warn)
{
    if (cfg.corpus.empty())
        throw UsageError("no corpus path given");
    auto docs = parse_corpus(cfg.corpus);
    StopWords stop = cfg.stopwords.empty() ? StopWords{} : load_stopwords(cfg.stopwords);
    StemMap stem = cfg.stem_map.empty() ? StemMap{} : load_stem_map(cfg.stem_map);
    for (auto& d : docs)
        d = normalize(d, stop, stem);
    auto bow = build_bow(docs);
    for (const auto& id : bow.empty_docs)
        warn.push_back("document '" + id + "' has no tokens after normalization");
    write_bow(out, bow.vocab, bow.bow);
}

void stage_represent(const RunConfig& cfg, const fs::path& out, Warnings& warn)
{
    fs::create_directories(out);
    Representations reps;
    SourceMap sources;
    switch (cfg.mode) {
    case InputMode::corpus: {
        stage_ingest(cfg, out / "bow", warn);
        auto bow = read_bow(out / "bow");
        reps = fit_lda(bow.bow, bow.vocab, cfg.lda, &warn);
        for (std::size_t d = 0; d < bow.bow.rows(); ++d)
            sources[bow.bow.doc_order[d]] = bow.bow.sources[d];
        break;
    }
    case InputMode::representations: {
        if (cfg.representations.empty())
            throw UsageError("no representations path given");
        reps = load_representations(cfg.representations);
        if (!cfg.sources.empty())
            sources = load_sources(cfg.sources);
        else
            for (const auto& r : reps)
                sources[r.doc_id] = "all";
        break;
    }
    case InputMode::synth: {
        reps = generate(cfg.synth);
        for (const auto& r : reps)
            sources[r.doc_id] = cfg.synth.source;
        write_labels(out / "labels.csv", ground_truth(cfg.synth));
        break;
    }
    }
    write_representations(out / "representations.csv", reps);
    write_sources(out / "sources.csv", sources);
}

void stage_signals(const fs::path& representations, const fs::path& sources_path, const RunConfig& cfg,
                   const fs::path& out, Warnings& warn)
{
    auto reps = load_representations(representations);
    SourceMap sources;
    if (!sources_path.empty() && fs::exists(sources_path))
        sources = load_sources(sources_path);
    else
        for (const auto& r : reps)
            sources[r.doc_id] = "all";
    auto groups = group_by_source(reps, sources, cfg.per_source);

    fs::create_directories(out);
    std::ofstream index(out / "index.csv");
    if (!index)
        throw DataError("cannot write " + (out / "index.csv").string());
    csv::write_row(index, {"source", "file"});
    std::set<std::string> used;
    std::size_t written = 0;
    std::string last_error;
    for (const auto& [name, series] : groups) {
        SignalSeries s;
        try {
            s = compute_signals(series, cfg.window);
        } catch (const DataError& e) {
            last_error = e.what();
            warn.push_back("source '" + name + "' skipped: " + e.what());
            continue;
        }
        s.source = name;
        auto file = "signals_" + safe_name(name);
        for (int k = 2; used.count(file); ++k)
            file = "signals_" + safe_name(name) + "-" + std::to_string(k);
        used.insert(file);
        write_signals(out / (file + ".csv"), s);
        csv::write_row(index, {name, file + ".csv"});
        ++written;
    }
    if (written == 0)
        throw DataError("no source long enough for signals: " + last_error);
}

void stage_trend(const fs::path& signals_dir, const RunConfig& cfg, const fs::path& out)
{
    fs::create_directories(out);
    for (const auto& [name, s] : load_signals(signals_dir)) {
        auto base = "trend_" + safe_name(name);
        write_trend(out / (base + "_novelty.csv"), s, s.novelty, adaptive_trend(s.novelty, cfg.filter));
        write_trend(out / (base + "_resonance.csv"), s, s.resonance, adaptive_trend(s.resonance, cfg.filter));
    }
    write_trend_meta(out / "trend_meta.txt", cfg.filter);
}

void stage_slopes(const fs::path& signals_dir, const RunConfig& cfg, const fs::path& out, Warnings& warn)
{
    fs::create_directories(out);
    auto all = load_signals(signals_dir);
    auto cutoff = cfg.resolved_cutoff();
    std::map<std::string, SignalSeries> by_source(all.begin(), all.end());
    std::optional<BaselineSummary> summary;
    if (cutoff) {
        summary = baseline_slopes(by_source, *cutoff);
        for (const auto& w : summary->excluded)
            warn.push_back("baseline excluded " + w);
    }
    for (const auto& [name, s] : all) {
        auto windows = event_window_slopes(s, cfg.events);
        if (summary && summary->per_source.count(name))
            score_windows(windows, summary->per_source.at(name), cfg.detect);
        write_slope_report(out / ("slopes_" + safe_name(name) + ".csv"), windows);
    }

    std::ofstream os(out / "baseline.csv");
    csv::write_row(os, {"source", "beta0", "beta1", "stderr1", "r2", "n_points"});
    std::ofstream meta(out / "baseline_summary.txt");
    meta << "cutoff=" << (cutoff ? format_date(*cutoff) : "") << "\n";
    if (summary) {
        for (const auto& [name, f] : summary->per_source)
            csv::write_row(os, {name, format_report(f.beta0), format_report(f.beta1), format_report(f.stderr1),
                                format_report(f.r2), std::to_string(f.n_points)});
        meta << "mean=" << format_report(summary->mean) << "\nsd=" << format_report(summary->sd) << "\n";
    } else {
        meta << "mean=\nsd=\n";
    }
}

void stage_detect(const fs::path& signals_dir, const RunConfig& cfg, const fs::path& out, Warnings& warn)
{
    fs::create_directories(out);
    std::ofstream summary(out / "summary.csv");
    csv::write_row(summary, {"source", "cutoff", "baseline_beta1", "n_windows", "n_decoupled", "n_episodes"});
    std::size_t ok = 0;
    std::optional<NumericalError> numerical;
    for (const auto& [name, s] : load_signals(signals_dir)) {
        Date cutoff = cutoff_or_end(cfg, s, warn);
        DecouplingReport rep;
        try {
            rep = detect(s, cutoff, cfg.detect);
        } catch (const NumericalError& e) {
            warn.push_back("source '" + name + "': " + e.what());
            numerical.emplace(e.what());
            continue;
        }
        auto base = safe_name(name);
        write_slope_report(out / ("windows_" + base + ".csv"), rep.windows);
        write_episodes(out / ("episodes_" + base + ".csv"), rep.episodes);
        std::size_t flagged = 0;
        for (const auto& w : rep.windows)
            flagged += w.verdict == "decoupled";
        csv::write_row(summary, {name, format_date(cutoff), format_report(rep.baseline.beta1),
                                 std::to_string(rep.windows.size()), std::to_string(flagged),
                                 std::to_string(rep.episodes.size())});
        ++ok;
    }
    if (ok == 0 && numerical)
        throw *numerical;
}

void stage_plot(const fs::path& signals_dir, const fs::path& trend_dir, const fs::path& slopes_dir,
                const RunConfig& cfg, const fs::path& out)
{
    fs::create_directories(out);
    for (const auto& [name, s] : load_signals(signals_dir)) {
        auto base = safe_name(name);
        auto nov = read_trend_values(trend_dir / ("trend_" + base + "_novelty.csv"), s);
        auto res = read_trend_values(trend_dir / ("trend_" + base + "_resonance.csv"), s);
        auto slopes = read_slope_rows(slopes_dir / ("slopes_" + base + ".csv"));
        render_source_figure(out / ("figure_" + base + ".svg"), name, s, nov, res, slopes, cfg.events);
    }
    std::vector<BaselineRow> rows;
    auto bpath = slopes_dir / "baseline.csv";
    auto t = csv::read(bpath);
    auto cs = csv::column(t, "source", bpath), cb = csv::column(t, "beta1", bpath);
    for (const auto& r : t.rows)
        rows.push_back({r[cs], r[cb]});
    std::string mean, sd;
    std::ifstream meta(slopes_dir / "baseline_summary.txt");
    std::string line;
    while (std::getline(meta, line)) {
        if (line.rfind("mean=", 0) == 0)
            mean = line.substr(5);
        if (line.rfind("sd=", 0) == 0)
            sd = line.substr(3);
    }
    render_baseline_figure(out / "baselines.svg", rows, mean, sd);
}

fs::path run_pipeline(const RunConfig& cfg, const fs::path& out_base, Warnings& warn)
{
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "run-%Y%m%d-%H%M%S", &tm);
    fs::create_directories(out_base);
    fs::path dir = out_base / stamp;
    for (int k = 2; fs::exists(dir); ++k)
        dir = out_base / (std::string(stamp) + "-" + std::to_string(k));
    fs::create_directories(dir);
    {
        std::ofstream os(dir / "config.resolved.txt");
        os << cfg.to_config().dump();
    }
    run_stage("represent", [&] { stage_represent(cfg, dir / "represent", warn); });
    run_stage("signals", [&] {
        stage_signals(dir / "represent" / "representations.csv", dir / "represent" / "sources.csv", cfg,
                      dir / "signals", warn);
    });
    run_stage("trend", [&] { stage_trend(dir / "signals", cfg, dir / "trend"); });
    run_stage("slopes", [&] { stage_slopes(dir / "signals", cfg, dir / "slopes", warn); });
    run_stage("detect", [&] { stage_detect(dir / "signals", cfg, dir / "detect", warn); });
    run_stage("plot", [&] { stage_plot(dir / "signals", dir / "trend", dir / "slopes", cfg, dir / "plots"); });
    return dir;
}

} // namespace nid
