#include "nid/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <optional>
#include <sstream>
#include <iostream>

#include "nid/pipeline.hpp"

namespace nid {

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = ".";

    std::string corpus, stopwords, stem_map;
    std::string bow, representations, sources;
    std::string signals = "", trend = "", slopes = "";
    std::optional<int> window, n, order, sliding_w, min_run, topics;
    bool pooled = false, select = false, no_event = false;
    std::string events, cutoff, event;
    std::optional<double> tau, floor;
    std::optional<std::size_t> n_docs;
};

RunConfig resolve(const Options& o)
{
    Config c;
    if (!o.config.empty())
        c = Config::load(o.config);
    auto cfg = RunConfig::from(c);
    if (o.seed)
        cfg.set_seed(*o.seed);
    if (!o.corpus.empty())
        cfg.corpus = o.corpus;
    if (!o.stopwords.empty())
        cfg.stopwords = o.stopwords;
    if (!o.stem_map.empty())
        cfg.stem_map = o.stem_map;
    if (o.window)
        cfg.window.w = *o.window;
    if (o.pooled)
        cfg.per_source = false;
    if (o.n)
        cfg.filter.n = *o.n;
    if (o.order)
        cfg.filter.order = *o.order;
    if (o.select)
        cfg.filter.select = true;
    if (o.tau)
        cfg.detect.tau = *o.tau;
    if (o.floor)
        cfg.detect.floor = *o.floor;
    if (o.sliding_w)
        cfg.detect.sliding_w = *o.sliding_w;
    if (o.min_run)
        cfg.detect.min_run = *o.min_run;
    if (!o.events.empty()) {
        cfg.events = parse_events(o.events);
        check_events_sorted(cfg.events);
    }
    if (!o.cutoff.empty()) {
        Date d;
        if (!try_parse_date(o.cutoff, d))
            throw UsageError("--cutoff: invalid date '" + o.cutoff + "'");
        cfg.baseline_cutoff = d;
    }
    if (o.topics) {
        cfg.lda = LdaConfig::with_topics(*o.topics);
        cfg.lda.seed = cfg.seed;
        cfg.synth.K = *o.topics;
    }
    if (o.n_docs)
        cfg.synth.n_docs = *o.n_docs;
    if (o.no_event)
        cfg.synth.event.reset();
    if (!o.event.empty()) {
        EventInjection ev;
        char sep1 = 0, sep2 = 0;
        std::istringstream ss(o.event);
        if (!(ss >> ev.start >> sep1 >> ev.length >> sep2 >> ev.strength) || sep1 != ':' || sep2 != ':')
            throw UsageError("--event must look like START:LENGTH:STRENGTH");
        cfg.synth.event = ev;
    }
    return cfg;
}

fs::path or_default(const std::string& given, const fs::path& fallback)
{
    return given.empty() ? fallback : fs::path(given);
}

void cmd_simulate(RunConfig cfg, const fs::path& out)
{
    cfg.mode = InputMode::synth;
    Warnings warn;
    stage_represent(cfg, out, warn);
    // Follow-up config that consumes the generated stream; event boundaries become named events.
    RunConfig next = cfg;
    next.mode = InputMode::representations;
    next.representations = "representations.csv";
    next.sources = "sources.csv";
    if (cfg.synth.event && next.events.empty()) {
        auto on = cfg.synth.start_date + std::chrono::days{static_cast<long>(cfg.synth.event->start)};
        auto off = on + std::chrono::days{static_cast<long>(cfg.synth.event->length)};
        next.events = {{"Onset", on}};
        if (cfg.synth.event->start + cfg.synth.event->length < cfg.synth.n_docs)
            next.events.push_back({"Release", off});
        if (!next.baseline_cutoff)
            next.baseline_cutoff = on;
    }
    std::ofstream os(out / "pipeline.cfg");
    os << "# generated by nid simulate\n" << next.to_config().dump();
}

void print_warnings(const Warnings& w, std::ostream& err)
{
    for (const auto& m : w)
        err << "nid: warning: " << m << "\n";
}

} // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"News information decoupling pipeline", "nid"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--config", o.config, "flat key=value config file");
    app.add_option("--seed", o.seed, "random seed for LDA and synthetic streams");
    app.add_option("--out", o.out, "output directory")->capture_default_str();

    auto* ingest = app.add_subcommand("ingest", "normalize a JSONL corpus into bag-of-words files");
    ingest->add_option("--corpus", o.corpus, "JSONL corpus");
    ingest->add_option("--stopwords", o.stopwords, "stopword file");
    ingest->add_option("--stem-map", o.stem_map, "surface<TAB>lemma file");

    auto* represent = app.add_subcommand("represent", "topic vectors from BoW files, a CSV, or the config input");
    represent->add_option("--bow", o.bow, "directory written by ingest");
    represent->add_option("--representations", o.representations, "representation CSV to validate");
    represent->add_option("--sources", o.sources, "doc_id,source CSV");
    represent->add_option("--topics", o.topics, "number of topics K");

    auto* signals = app.add_subcommand("signals", "novelty, transience and resonance");
    signals->add_option("--representations", o.representations, "representation CSV");
    signals->add_option("--sources", o.sources, "doc_id,source CSV");
    signals->add_option("--window", o.window, "window w in documents");
    signals->add_flag("--pooled", o.pooled, "ignore sources and pool all documents");

    auto* trend = app.add_subcommand("trend", "adaptive polynomial trends of novelty and resonance");
    trend->add_option("--signals", o.signals, "signals directory");
    trend->add_option("--n", o.n, "half-window n");
    trend->add_option("--order", o.order, "polynomial order (maximum with --select)");
    trend->add_flag("--select", o.select, "choose order by adjusted R^2");

    auto* slopes = app.add_subcommand("slopes", "event-window novelty x resonance slopes");
    slopes->add_option("--signals", o.signals, "signals directory");
    slopes->add_option("--events", o.events, "Name:YYYY-MM-DD, ...");
    slopes->add_option("--cutoff", o.cutoff, "baseline cutoff date");

    auto* det = app.add_subcommand("detect", "sliding-window decoupling detection");
    det->add_option("--signals", o.signals, "signals directory");
    det->add_option("--cutoff", o.cutoff, "baseline cutoff date");
    det->add_option("--tau", o.tau, "score threshold");
    det->add_option("--floor", o.floor, "minimum baseline slope");
    det->add_option("--sliding-w", o.sliding_w, "documents per sliding window");
    det->add_option("--min-run", o.min_run, "flagged windows per episode");

    auto* sim = app.add_subcommand("simulate", "synthetic topic stream with optional injected event");
    sim->add_option("--n-docs", o.n_docs, "number of documents");
    sim->add_option("--topics", o.topics, "dimension K");
    sim->add_option("--event", o.event, "START:LENGTH:STRENGTH");
    sim->add_flag("--no-event", o.no_event, "drop any configured event");

    auto* plot = app.add_subcommand("plot", "SVG figures from persisted stage outputs");
    plot->add_option("--signals", o.signals, "signals directory");
    plot->add_option("--trend", o.trend, "trend directory");
    plot->add_option("--slopes", o.slopes, "slopes directory");
    plot->add_option("--events", o.events, "Name:YYYY-MM-DD, ...");

    auto* pipe = app.add_subcommand("pipeline", "run every stage into a timestamped run directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "nid: usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        auto cfg = resolve(o);
        fs::path outdir = o.out;
        Warnings warn;
        if (ingest->parsed()) {
            stage_ingest(cfg, outdir, warn);
        } else if (represent->parsed()) {
            if (!o.bow.empty()) {
                fs::create_directories(outdir);
                auto bow = read_bow(o.bow);
                auto reps = fit_lda(bow.bow, bow.vocab, cfg.lda, &warn);
                SourceMap sources;
                for (std::size_t d = 0; d < bow.bow.rows(); ++d)
                    sources[bow.bow.doc_order[d]] = bow.bow.sources[d];
                write_representations(outdir / "representations.csv", reps);
                write_sources(outdir / "sources.csv", sources);
            } else {
                if (!o.representations.empty()) {
                    cfg.mode = InputMode::representations;
                    cfg.representations = o.representations;
                    cfg.sources = o.sources;
                }
                stage_represent(cfg, outdir, warn);
            }
        } else if (signals->parsed()) {
            stage_signals(or_default(o.representations, outdir / "representations.csv"),
                          or_default(o.sources, outdir / "sources.csv"), cfg, outdir / "signals", warn);
        } else if (trend->parsed()) {
            stage_trend(or_default(o.signals, outdir / "signals"), cfg, outdir / "trend");
        } else if (slopes->parsed()) {
            stage_slopes(or_default(o.signals, outdir / "signals"), cfg, outdir / "slopes", warn);
        } else if (det->parsed()) {
            stage_detect(or_default(o.signals, outdir / "signals"), cfg, outdir / "detect", warn);
        } else if (sim->parsed()) {
            cmd_simulate(cfg, outdir);
        } else if (plot->parsed()) {
            stage_plot(or_default(o.signals, outdir / "signals"), or_default(o.trend, outdir / "trend"),
                       or_default(o.slopes, outdir / "slopes"), cfg, outdir / "plots");
        } else if (pipe->parsed()) {
            if (o.config.empty())
                throw UsageError("pipeline requires --config");
            auto dir = run_pipeline(cfg, outdir, warn);
            out << dir.string() << "\n";
        }
        print_warnings(warn, err);
        return 0;
    } catch (const UsageError& e) {
        err << "nid: usage error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        err << "nid: numerical error: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        err << "nid: data error: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        err << "nid: data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "nid: data error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace nid
