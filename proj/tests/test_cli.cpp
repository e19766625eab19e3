#include <doctest.h>

#include <cstdlib>
#include <regex>
#include <sstream>

#include "nid/cli.hpp"
#include "nid/config.hpp"
#include "nid/csv.hpp"
#include "nid/pipeline.hpp"
#include "test_util.hpp"

using namespace nid;
using testutil::read_file;
using testutil::TempDir;
using testutil::write_file;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "nid");
    std::vector<char*> argv;
    for (auto& a : args)
        argv.push_back(a.data());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

const char* corpus =
    R"({"id":"a1","date":"2020-01-02","source":"P","title":"Storm","text":"The storm hits the coast, and 12 homes flooded."}
{"id":"a2","date":"2020-01-01","source":"P","text":"Election results are in; turnout rose."}
{"id":"a3","date":"2020-01-03","source":"Q","text":"Flooded roads close; the storm moves north."}
)";

// Beta1 strings shown on slope annotations.
std::vector<std::string> annotated_slopes(const std::string& svg)
{
    std::vector<std::string> out;
    std::regex re("class=\"slope\">[^<]*β1 = ([^<]*)<");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it)
        out.push_back((*it)[1]);
    return out;
}

fs::path only_run_dir(const fs::path& base)
{
    std::vector<fs::path> runs;
    for (const auto& e : fs::directory_iterator(base))
        if (e.path().filename().string().rfind("run-", 0) == 0)
            runs.push_back(e.path());
    REQUIRE(runs.size() == 1);
    return runs[0];
}

} // namespace

TEST_CASE("config parsing")
{
    auto c = Config::parse("# comment\nrun.seed = 9\n\nsignals.window=5\nevents = A:2020-01-10, B:2020-02-01\n");
    CHECK(c.get("run.seed") == "9");
    auto r = RunConfig::from(c);
    CHECK(r.seed == 9);
    CHECK(r.window.w == 5);
    CHECK(r.events.size() == 2);
    CHECK(r.resolved_cutoff() == r.events[0].date);
    CHECK(r.mode == InputMode::synth);
    CHECK_THROWS_AS(RunConfig::from(Config::parse("bogus.key = 1\n")), UsageError);
    CHECK_THROWS_AS(Config::parse("no equals sign\n"), UsageError);
    CHECK_THROWS_AS(RunConfig::from(Config::parse("signals.window = seven\n")), UsageError);
    CHECK_THROWS_AS(RunConfig::from(Config::parse("events = B:2020-02-01, A:2020-01-10\n")), UsageError);

    auto round = RunConfig::from(Config::parse(r.to_config().dump()));
    CHECK(round.to_config().dump() == r.to_config().dump());
}

TEST_CASE("ingest writes BoW files and reruns byte-identically")
{
    TempDir t;
    write_file(t / "c.jsonl", corpus);
    write_file(t / "stop.txt", "the\nand\nare\nin\n");
    auto r1 = run({"ingest", "--corpus", (t / "c.jsonl").string(), "--stopwords", (t / "stop.txt").string(), "--out",
                   (t / "o1").string()});
    REQUIRE(r1.code == 0);
    auto r2 = run({"--out", (t / "o2").string(), "ingest", "--corpus", (t / "c.jsonl").string(), "--stopwords",
                   (t / "stop.txt").string()});
    REQUIRE(r2.code == 0);
    for (const char* f : {"bow.csv", "vocab.txt", "docs.csv"}) {
        CHECK(fs::exists(t / "o1" / f));
        CHECK(read_file(t / "o1" / f) == read_file(t / "o2" / f));
    }
    auto vocab = read_file(t / "o1" / "vocab.txt");
    CHECK(vocab.find("storm\n") != std::string::npos);
    CHECK(vocab.find("the\n") == std::string::npos);
    CHECK(read_file(t / "o1" / "docs.csv").find("0,a2,2020-01-01,P\n") != std::string::npos);
}

TEST_CASE("exit codes and diagnostics")
{
    TempDir t;
    auto missing = run({"ingest", "--corpus", (t / "nope.jsonl").string(), "--out", (t / "o").string()});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("nope.jsonl") != std::string::npos);

    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"detect", "--tau", "abc"}).code == 1);
    CHECK(run({"pipeline"}).code == 1);
    CHECK(run({"--help"}).code == 0);

    write_file(t / "bad.cfg", "nonsense.key = 3\n");
    auto bad = run({"--config", (t / "bad.cfg").string(), "signals"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("nonsense.key") != std::string::npos);

    // Uncoupled stream: constant content, so the baseline slope cannot be estimated.
    write_file(t / "flat.cfg", "synth.n_docs = 80\nsynth.base_drift = 0\nsynth.noise = 0\n"
                               "detect.baseline_cutoff = 2020-02-01\n");
    auto flat = run({"--config", (t / "flat.cfg").string(), "--out", (t / "flat").string(), "pipeline"});
    CHECK(flat.code == 3);
    CHECK(flat.err.find("stage slopes") != std::string::npos);
}

TEST_CASE("the installed binary reports exit codes")
{
    TempDir t;
    std::string bin = NID_BIN;
    CHECK(WEXITSTATUS(std::system((bin + " ingest --corpus " + (t / "x.jsonl").string() + " 2>/dev/null").c_str())) == 2);
    CHECK(WEXITSTATUS(std::system((bin + " --bogus 2>/dev/null").c_str())) == 1);
    CHECK(WEXITSTATUS(std::system((bin + " simulate --n-docs 50 --out " + (t / "s").string()).c_str())) == 0);
    CHECK(fs::exists(t / "s" / "representations.csv"));
}

TEST_CASE("synthetic pipeline writes every stage")
{
    TempDir t;
    write_file(t / "p.cfg", "synth.event_start = 200\nsynth.event_length = 60\n"
                            "events = Onset:2020-07-19, Release:2020-09-17\n");
    auto r = run({"--config", (t / "p.cfg").string(), "--seed", "3", "--out", (t / "runs").string(), "pipeline"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    auto dir = only_run_dir(t / "runs");
    CHECK(r.out == dir.string() + "\n");
    for (const char* f : {"config.resolved.txt", "represent/representations.csv", "represent/labels.csv",
                          "signals/signals_synth.csv", "trend/trend_synth_novelty.csv",
                          "trend/trend_synth_resonance.csv", "slopes/slopes_synth.csv", "slopes/baseline.csv",
                          "detect/windows_synth.csv", "detect/episodes_synth.csv", "plots/figure_synth.svg",
                          "plots/baselines.svg"})
        CHECK_MESSAGE(fs::exists(dir / f), f);
    CHECK(read_file(dir / "config.resolved.txt").find("run.seed = 3") != std::string::npos);

    auto slopes = csv::read(dir / "slopes" / "slopes_synth.csv");
    REQUIRE(slopes.rows.size() == 3);
    CHECK(slopes.rows[1][0] == "Onset→Release");
    CHECK(slopes.rows[1][9] == "decoupled");

    // Annotations carry the CSV strings verbatim.
    auto shown = annotated_slopes(read_file(dir / "plots" / "figure_synth.svg"));
    REQUIRE(shown.size() == 3);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(shown[k] == slopes.rows[k][4]);
    auto base = csv::read(dir / "slopes" / "baseline.csv");
    auto bshown = annotated_slopes(read_file(dir / "plots" / "baselines.svg"));
    REQUIRE(bshown.size() == 1);
    CHECK(bshown[0] == base.rows[0][2]);

    // Stages re-run from persisted intermediates.
    auto again = run({"--config", (t / "p.cfg").string(), "--out", dir.string(), "detect", "--tau", "0.2"});
    CHECK(again.code == 0);
}

TEST_CASE("pipeline without events: one window, detect still runs")
{
    TempDir t;
    write_file(t / "p.cfg", "synth.n_docs = 150\n");
    auto r = run({"--config", (t / "p.cfg").string(), "--out", (t / "runs").string(), "pipeline"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    auto dir = only_run_dir(t / "runs");
    auto slopes = csv::read(dir / "slopes" / "slopes_synth.csv");
    REQUIRE(slopes.rows.size() == 1);
    CHECK(slopes.rows[0][0] == "all");
    CHECK(fs::exists(dir / "detect" / "episodes_synth.csv"));
    CHECK(annotated_slopes(read_file(dir / "plots" / "figure_synth.svg")).size() == 1);
}

TEST_CASE("identical config and seed give identical outputs")
{
    TempDir t;
    write_file(t / "p.cfg", "synth.n_docs = 200\nsynth.event_start = 100\nsynth.event_length = 40\n"
                            "events = E:2020-04-10\n");
    REQUIRE(run({"--config", (t / "p.cfg").string(), "--seed", "5", "--out", (t / "a").string(), "pipeline"}).code == 0);
    REQUIRE(run({"--config", (t / "p.cfg").string(), "--seed", "5", "--out", (t / "b").string(), "pipeline"}).code == 0);
    auto a = only_run_dir(t / "a"), b = only_run_dir(t / "b");
    for (const char* f : {"signals/signals_synth.csv", "slopes/slopes_synth.csv", "detect/episodes_synth.csv",
                          "detect/windows_synth.csv", "trend/trend_synth_novelty.csv", "plots/figure_synth.svg"})
        CHECK_MESSAGE(read_file(a / f) == read_file(b / f), f);
    REQUIRE(run({"--config", (t / "p.cfg").string(), "--seed", "6", "--out", (t / "c").string(), "pipeline"}).code == 0);
    CHECK(read_file(a / "signals/signals_synth.csv") != read_file(only_run_dir(t / "c") / "signals/signals_synth.csv"));
}

TEST_CASE("four sources give four figures and one baseline figure")
{
    TempDir t;
    Representations all;
    SourceMap src;
    for (int k = 0; k < 4; ++k) {
        StreamConfig sc;
        sc.n_docs = 120;
        sc.seed = 40 + k;
        std::string name = std::string("Paper ") + static_cast<char>('A' + k);
        for (auto d : generate(sc)) {
            d.doc_id = name.substr(6) + d.doc_id;
            src[d.doc_id] = name;
            all.push_back(std::move(d));
        }
    }
    write_representations(t / "reps.csv", all);
    write_sources(t / "src.csv", src);
    write_file(t / "p.cfg", "representations.path = reps.csv\nrepresentations.sources = src.csv\n"
                            "events = Mid:2020-03-01\n");
    auto r = run({"--config", (t / "p.cfg").string(), "--out", (t / "runs").string(), "pipeline"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    auto plots = only_run_dir(t / "runs") / "plots";
    int figures = 0, baselines = 0;
    for (const auto& e : fs::directory_iterator(plots)) {
        auto n = e.path().filename().string();
        figures += n.rfind("figure_", 0) == 0;
        baselines += n == "baselines.svg";
    }
    CHECK(figures == 4);
    CHECK(baselines == 1);
    CHECK(annotated_slopes(read_file(plots / "baselines.svg")).size() == 4);
}

TEST_CASE("plot rejects misaligned trends")
{
    TempDir t;
    write_file(t / "p.cfg", "synth.n_docs = 100\n");
    REQUIRE(run({"--config", (t / "p.cfg").string(), "--out", (t / "runs").string(), "pipeline"}).code == 0);
    auto dir = only_run_dir(t / "runs");
    auto path = dir / "trend" / "trend_synth_novelty.csv";
    auto text = read_file(path);
    auto pos = text.find("d00042");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 6, "zzzzzz");
    write_file(path, text);
    auto r = run({"--out", dir.string(), "plot"});
    CHECK(r.code == 2);
    CHECK(r.err.find("d00042") != std::string::npos);
}
