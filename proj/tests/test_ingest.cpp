#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "nid/ingest.hpp"
#include "test_util.hpp"

using namespace nid;
using testutil::TempDir;
using testutil::write_file;

namespace {

std::vector<std::string> ids(const std::vector<Document>& docs)
{
    std::vector<std::string> out;
    for (const auto& d : docs)
        out.push_back(d.id);
    return out;
}

Document doc(const std::string& text)
{
    Document d;
    d.id = "x";
    d.raw_text = text;
    return d;
}

} // namespace

TEST_CASE("parse_corpus sorts by date then id")
{
    TempDir t;
    write_file(t / "c.jsonl", R"({"id":"b","date":"2020-03-01","source":"s","text":"x"}
{"id":"a","date":"2020-02-01","source":"s","text":"y"}
{"id":"c","date":"2020-02-01","source":"s","text":"z"}
)");
    auto docs = parse_corpus(t / "c.jsonl");
    CHECK(ids(docs) == std::vector<std::string>{"a", "c", "b"});
    CHECK(docs[2].raw_text == "x");
    CHECK(docs[0].tokens.empty());
}

TEST_CASE("parse_corpus edge cases and errors")
{
    TempDir t;
    write_file(t / "empty.jsonl", "");
    CHECK(parse_corpus(t / "empty.jsonl").empty());

    write_file(t / "nodate.jsonl", "{\"id\":\"a\",\"date\":\"2020-01-01\",\"source\":\"s\",\"text\":\"x\"}\n"
                                   "{\"id\":\"b\",\"source\":\"s\",\"text\":\"x\"}\n");
    CHECK_THROWS_WITH_AS(parse_corpus(t / "nodate.jsonl"), doctest::Contains(":2: missing field 'date'"), DataError);

    write_file(t / "bad.jsonl", "{\"id\":\"a\",\"date\":\"2020-01-01\",\"source\":\"s\",\"text\":\"x\"}\n\n{oops\n");
    CHECK_THROWS_WITH_AS(parse_corpus(t / "bad.jsonl"), doctest::Contains(":3: malformed JSON"), DataError);

    write_file(t / "dup.jsonl", "{\"id\":\"a\",\"date\":\"2020-01-01\",\"source\":\"s\",\"text\":\"x\"}\n"
                                "{\"id\":\"a\",\"date\":\"2020-01-02\",\"source\":\"s\",\"text\":\"y\"}\n");
    CHECK_THROWS_WITH_AS(parse_corpus(t / "dup.jsonl"), doctest::Contains("duplicate document id 'a'"), DataError);

    write_file(t / "date.jsonl", "{\"id\":\"q7\",\"date\":\"2020-02-30\",\"source\":\"s\",\"text\":\"x\"}\n");
    CHECK_THROWS_WITH_AS(parse_corpus(t / "date.jsonl"), doctest::Contains("'q7'"), DataError);

    CHECK_THROWS_WITH_AS(parse_corpus(t / "missing.jsonl"), doctest::Contains("missing.jsonl"), DataError);
}

TEST_CASE("parse_corpus order is invariant under line permutation")
{
    std::mt19937_64 rng(7);
    std::vector<std::string> lines;
    for (int i = 0; i < 30; ++i)
        lines.push_back("{\"id\":\"id" + std::to_string((i * 7) % 30) + "\",\"date\":\"2020-01-0" +
                        std::to_string(1 + i % 4) + "\",\"source\":\"s\",\"text\":\"t\"}");
    TempDir t;
    std::vector<std::string> reference;
    for (int rep = 0; rep < 5; ++rep) {
        std::shuffle(lines.begin(), lines.end(), rng);
        std::string body;
        for (const auto& l : lines)
            body += l + "\n";
        write_file(t / "c.jsonl", body);
        auto got = ids(parse_corpus(t / "c.jsonl"));
        if (rep == 0)
            reference = got;
        CHECK(got == reference);
    }
}

TEST_CASE("title is joined to the body text")
{
    TempDir t;
    write_file(t / "c.jsonl", R"({"id":"a","date":"2020-01-01","source":"s","title":"Head","text":"Body"})" "\n");
    CHECK(parse_corpus(t / "c.jsonl")[0].raw_text == "Head\nBody");
}

TEST_CASE("normalize rule examples")
{
    CHECK(normalize(doc("Corona: 117 smittede i Danmark"), {"i"}, {}).tokens ==
          std::vector<std::string>{"corona", "smittede", "danmark"});
    CHECK(normalize(doc(""), {}, {}).tokens.empty());
    CHECK(normalize(doc("Viruses virus"), {}, {{"viruses", "virus"}}).tokens ==
          std::vector<std::string>{"virus", "virus"});
}

TEST_CASE("tokenizer keeps internal hyphens and apostrophes")
{
    CHECK(tokenize("«covid-19» (don't) ...") == std::vector<std::string>{"covid-19", "don't"});
    CHECK(tokenize("a b\tc\n") == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("numeral rule")
{
    for (const char* t : {"117", "1.000", "2020-03-11", "3,5", "0"})
        CHECK(is_numeral(t));
    for (const char* t : {"covid19", "b52", "19a", "x"})
        CHECK_FALSE(is_numeral(t));
    CHECK(normalize(doc("1.000 kr, covid19 og 2020-03-11"), {}, {}).tokens ==
          std::vector<std::string>{"kr", "covid19", "og"});
}

TEST_CASE("casefold covers Danish letters")
{
    CHECK(casefold("ÆØÅ Straße ÉCOLE") == "æøå straße école");
    auto t = normalize(doc("Ærø ØSTERBRO"), {}, {}).tokens;
    CHECK(t == std::vector<std::string>{"ærø", "østerbro"});
}

TEST_CASE("normalize is idempotent")
{
    std::mt19937_64 rng(3);
    const std::vector<std::string> pieces{"Hello", "WORLD", "123", "1,5", ":", "Æble", "i", "the", "--x--", "é", " ", "\t"};
    StopWords stop{"i", "the"};
    StemMap stem{{"hello", "hi"}};
    for (int k = 0; k < 200; ++k) {
        std::string text;
        for (int i = 0; i < 12; ++i)
            text += pieces[rng() % pieces.size()] + ((rng() % 2) ? " " : "");
        auto once = normalize(doc(text), stop, stem);
        auto twice = normalize(once, stop, stem);
        CHECK(once.tokens == twice.tokens);
        for (const auto& tok : once.tokens) {
            CHECK_FALSE(is_numeral(tok));
            CHECK(stop.count(tok) == 0);
            CHECK(casefold(tok) == tok);
        }
    }
}

TEST_CASE("build_bow counting")
{
    Document d;
    d.id = "d";
    d.tokens = {"a", "b", "a"};
    auto r = build_bow({d});
    CHECK(r.vocab.terms == std::vector<std::string>{"a", "b"});
    REQUIRE(r.bow.counts[0].size() == 2);
    CHECK(r.bow.counts[0][0].term == 0);
    CHECK(r.bow.counts[0][0].count == 2);
    CHECK(r.bow.counts[0][1].count == 1);

    Document e;
    e.id = "e";
    e.tokens = {"x", "y"};
    auto r2 = build_bow({d, e});
    CHECK(r2.vocab.size() == 4);
    CHECK(r2.bow.counts[1][0].term == 2);
    CHECK(r2.bow.counts[1][1].term == 3);
}

TEST_CASE("build_bow conserves counts against an independent recount")
{
    std::mt19937_64 rng(11);
    std::vector<Document> docs(10);
    for (int i = 0; i < 10; ++i) {
        docs[i].id = "d" + std::to_string(i);
        docs[i].timestamp = parse_date("2020-01-01") + std::chrono::days{i};
        for (int k = 0, n = static_cast<int>(rng() % 20); k < n; ++k)
            docs[i].tokens.push_back("w" + std::to_string(rng() % 15));
    }
    docs[0].tokens = {"w1"};
    auto r = build_bow(docs);
    REQUIRE(r.bow.rows() == 10);
    for (int i = 0; i < 10; ++i) {
        std::map<std::string, std::uint32_t> expect;
        for (const auto& t : docs[i].tokens)
            ++expect[t];
        std::map<std::string, std::uint32_t> got;
        for (const auto& e : r.bow.counts[i]) {
            CHECK(e.count >= 1);
            got[r.vocab.terms[e.term]] = e.count;
        }
        CHECK(got == expect);
        CHECK(r.bow.row_total(i) == docs[i].tokens.size());
    }
}

TEST_CASE("build_bow empty documents")
{
    Document a, b;
    a.id = "a";
    b.id = "b";
    b.tokens = {"z"};
    auto r = build_bow({a, b});
    CHECK(r.empty_docs == std::vector<std::string>{"a"});
    CHECK(r.bow.counts[0].empty());
    CHECK_THROWS_AS(build_bow({a}), DataError);
    CHECK_THROWS_AS(build_bow({b, a}), DataError); // not sorted by (date, id)
}

TEST_CASE("bow files round-trip")
{
    Document a, b;
    a.id = "a";
    a.source = "Politiken, Online";
    a.tokens = {"x", "y", "x"};
    b.id = "b";
    b.timestamp = parse_date("2020-02-02");
    b.source = "BT";
    auto r = build_bow({a, b});
    TempDir t;
    write_bow(t.path, r.vocab, r.bow);
    auto back = read_bow(t.path);
    CHECK(back.vocab.terms == r.vocab.terms);
    CHECK(back.bow.doc_order == r.bow.doc_order);
    CHECK(back.bow.sources == r.bow.sources);
    CHECK(back.bow.dates == r.bow.dates);
    CHECK(back.bow.counts[0].size() == 2);
    CHECK(back.bow.counts[0][0].count == 2);
    CHECK(back.empty_docs == std::vector<std::string>{"b"});
    CHECK(testutil::read_file(t / "bow.csv") == "doc_index,term_index,count\n0,0,2\n0,1,1\n");
}

TEST_CASE("shipped stopword lists load")
{
    auto da = load_stopwords(std::string(NID_DATA_DIR) + "/stopwords/da.txt");
    auto en = load_stopwords(std::string(NID_DATA_DIR) + "/stopwords/en.txt");
    CHECK(da.count("og"));
    CHECK(da.count("på"));
    CHECK(en.count("the"));
}

TEST_CASE("stem map file")
{
    TempDir t;
    write_file(t / "m.tsv", "Viruses\tvirus\n\nsmittede\tsmitte\n");
    auto m = load_stem_map(t / "m.tsv");
    CHECK(m.at("viruses") == "virus");
    CHECK(m.at("smittede") == "smitte");
    write_file(t / "bad.tsv", "novalue\n");
    CHECK_THROWS_AS(load_stem_map(t / "bad.tsv"), DataError);
}
