#include "nid/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include <json.hpp>

#include "nid/csv.hpp"

namespace nid {

namespace {

// Decodes one code point; invalid sequences yield U+FFFD and consume one byte.
char32_t decode(std::string_view s, std::size_t& i)
{
    auto b = static_cast<unsigned char>(s[i]);
    int len = b < 0x80 ? 1 : (b >> 5) == 0x6 ? 2 : (b >> 4) == 0xE ? 3 : (b >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) {
        ++i;
        return 0xFFFD;
    }
    char32_t cp = len == 1 ? b : len == 2 ? (b & 0x1F) : len == 3 ? (b & 0x0F) : (b & 0x07);
    for (int k = 1; k < len; ++k) {
        auto c = static_cast<unsigned char>(s[i + k]);
        if ((c >> 6) != 0x2) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (c & 0x3F);
    }
    i += len;
    return cp;
}

void encode(char32_t cp, std::string& out)
{
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

// Latin, Greek and Cyrillic coverage is enough for the Danish/English corpora.
char32_t to_lower(char32_t c)
{
    if (c >= 'A' && c <= 'Z')
        return c + 32;
    if (c < 0xC0)
        return c;
    if (c <= 0xDE && c != 0xD7)
        return c + 0x20;
    if ((c >= 0x100 && c <= 0x137) || (c >= 0x14A && c <= 0x177))
        return (c % 2 == 0) ? c + 1 : c;
    if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E))
        return (c % 2 == 1) ? c + 1 : c;
    if (c == 0x178)
        return 0xFF;
    if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2)
        return c + 0x20;
    if (c >= 0x410 && c <= 0x42F)
        return c + 0x20;
    if (c >= 0x400 && c <= 0x40F)
        return c + 0x50;
    if (c == 0x1E9E)
        return 0xDF;
    return c;
}

bool is_space(char32_t c)
{
    return (c >= 0x09 && c <= 0x0D) || c == 0x20 || c == 0x85 || c == 0xA0 || c == 0x1680 ||
           (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x205F ||
           c == 0x3000;
}

bool is_alnum(char32_t c)
{
    if (c < 0x80)
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    if (c < 0xC0)
        return c == 0xAA || c == 0xB5 || c == 0xBA;
    if (c == 0xD7 || c == 0xF7 || c == 0xFFFD)
        return false;
    if ((c >= 0x2000 && c <= 0x2BFF) || (c >= 0x3000 && c <= 0x303F) || (c >= 0xFE30 && c <= 0xFE4F) ||
        (c >= 0xFF00 && c <= 0xFF0F) || (c >= 0xFF1A && c <= 0xFF20) || (c >= 0xFF3B && c <= 0xFF40) ||
        (c >= 0xFF5B && c <= 0xFF65) || (c >= 0x1F000 && c <= 0x1FAFF))
        return false;
    return true;
}

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool doc_less(const Document& a, const Document& b)
{
    return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.id < b.id;
}

} // namespace

std::uint64_t BowMatrix::row_total(std::size_t d) const
{
    std::uint64_t n = 0;
    for (const auto& e : counts[d])
        n += e.count;
    return n;
}

std::vector<Document> parse_corpus(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open corpus " + path.string());

    std::vector<Document> docs;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        auto where = path.string() + ":" + std::to_string(lineno);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError(where + ": malformed JSON (" + e.what() + ")");
        }
        if (!j.is_object())
            throw DataError(where + ": expected a JSON object");
        auto field = [&](const char* key, bool required) -> std::string {
            auto it = j.find(key);
            if (it == j.end() || it->is_null()) {
                if (required)
                    throw DataError(where + ": missing field '" + key + "'");
                return {};
            }
            if (!it->is_string())
                throw DataError(where + ": field '" + key + "' must be a string");
            return it->get<std::string>();
        };

        Document d;
        d.id = field("id", true);
        if (d.id.empty())
            throw DataError(where + ": empty id");
        auto date = field("date", true);
        d.source = field("source", true);
        auto title = field("title", false);
        auto text = field("text", true);
        d.raw_text = title.empty() ? text : title + "\n" + text;
        if (!try_parse_date(date, d.timestamp))
            throw DataError("document '" + d.id + "': unparseable date '" + date + "'");
        if (!seen.insert(d.id).second)
            throw DataError("duplicate document id '" + d.id + "' at " + where);
        docs.push_back(std::move(d));
    }
    std::sort(docs.begin(), docs.end(), doc_less);
    return docs;
}

std::string casefold(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();)
        encode(to_lower(decode(s, i)), out);
    return out;
}

std::vector<std::string> tokenize(std::string_view s)
{
    std::vector<std::string> out;
    std::vector<char32_t> word;
    auto flush = [&] {
        std::size_t b = 0, e = word.size();
        while (b < e && !is_alnum(word[b]))
            ++b;
        while (e > b && !is_alnum(word[e - 1]))
            --e;
        if (b < e) {
            std::string t;
            for (std::size_t k = b; k < e; ++k)
                encode(word[k], t);
            out.push_back(std::move(t));
        }
        word.clear();
    };
    for (std::size_t i = 0; i < s.size();) {
        char32_t c = decode(s, i);
        if (is_space(c))
            flush();
        else
            word.push_back(c);
    }
    flush();
    return out;
}

bool is_numeral(std::string_view t)
{
    bool digit = false;
    for (char c : t) {
        if (c >= '0' && c <= '9')
            digit = true;
        else if (c != '.' && c != ',' && c != '-')
            return false;
    }
    return digit;
}

Document normalize(const Document& doc, const StopWords& stopwords, const StemMap& stem_map)
{
    Document out = doc;
    out.tokens.clear();
    for (auto& t : tokenize(casefold(doc.raw_text))) {
        if (is_numeral(t) || stopwords.count(t))
            continue;
        auto it = stem_map.find(t);
        out.tokens.push_back(it == stem_map.end() ? t : it->second);
    }
    return out;
}

BowResult build_bow(const std::vector<Document>& docs)
{
    BowResult r;
    bool any = false;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        const auto& doc = docs[d];
        if (d > 0 && !doc_less(docs[d - 1], doc))
            throw DataError("documents not strictly sorted by (date, id) at '" + doc.id + "'");
        std::map<std::uint32_t, std::uint32_t> row;
        for (const auto& t : doc.tokens) {
            auto [it, inserted] = r.vocab.index.try_emplace(t, static_cast<std::uint32_t>(r.vocab.terms.size()));
            if (inserted)
                r.vocab.terms.push_back(t);
            ++row[it->second];
        }
        if (doc.tokens.empty())
            r.empty_docs.push_back(doc.id);
        else
            any = true;
        std::vector<BowEntry> entries;
        entries.reserve(row.size());
        for (auto [term, count] : row)
            entries.push_back({term, count});
        r.bow.counts.push_back(std::move(entries));
        r.bow.doc_order.push_back(doc.id);
        r.bow.dates.push_back(doc.timestamp);
        r.bow.sources.push_back(doc.source);
    }
    if (!any)
        throw DataError("all documents are empty after normalization");
    return r;
}

StopWords load_stopwords(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open stopword file " + path.string());
    StopWords out;
    std::string line;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (!t.empty())
            out.insert(casefold(t));
    }
    return out;
}

StemMap load_stem_map(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open stem map " + path.string());
    StemMap out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected surface<TAB>lemma");
        out[casefold(trim(line.substr(0, tab)))] = casefold(trim(line.substr(tab + 1)));
    }
    return out;
}

void write_bow(const std::filesystem::path& dir, const Vocabulary& vocab, const BowMatrix& bow)
{
    std::filesystem::create_directories(dir);
    std::ofstream b(dir / "bow.csv"), v(dir / "vocab.txt"), d(dir / "docs.csv");
    if (!b || !v || !d)
        throw DataError("cannot write BoW files in " + dir.string());
    b << "doc_index,term_index,count\n";
    for (std::size_t i = 0; i < bow.rows(); ++i)
        for (const auto& e : bow.counts[i])
            b << i << ',' << e.term << ',' << e.count << '\n';
    for (const auto& t : vocab.terms)
        v << t << '\n';
    d << "doc_index,doc_id,date,source\n";
    for (std::size_t i = 0; i < bow.rows(); ++i)
        csv::write_row(d, {std::to_string(i), bow.doc_order[i], format_date(bow.dates[i]), bow.sources[i]});
}

BowResult read_bow(const std::filesystem::path& dir)
{
    BowResult r;
    {
        std::ifstream v(dir / "vocab.txt");
        if (!v)
            throw DataError("cannot open " + (dir / "vocab.txt").string());
        std::string line;
        while (std::getline(v, line)) {
            if (!r.vocab.index.try_emplace(line, static_cast<std::uint32_t>(r.vocab.terms.size())).second)
                throw DataError("duplicate vocabulary term '" + line + "'");
            r.vocab.terms.push_back(line);
        }
    }
    auto docs_path = dir / "docs.csv";
    auto docs = csv::read(docs_path);
    auto c_id = csv::column(docs, "doc_id", docs_path), c_date = csv::column(docs, "date", docs_path),
         c_src = csv::column(docs, "source", docs_path);
    for (const auto& row : docs.rows) {
        r.bow.doc_order.push_back(row[c_id]);
        r.bow.dates.push_back(parse_date(row[c_date]));
        r.bow.sources.push_back(row[c_src]);
    }
    r.bow.counts.resize(docs.rows.size());

    auto bow_path = dir / "bow.csv";
    auto t = csv::read(bow_path);
    auto cd = csv::column(t, "doc_index", bow_path), ct = csv::column(t, "term_index", bow_path),
         cc = csv::column(t, "count", bow_path);
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        auto where = bow_path.string() + ":" + std::to_string(t.line_numbers[k]);
        unsigned long d, term, count;
        try {
            d = std::stoul(t.rows[k][cd]);
            term = std::stoul(t.rows[k][ct]);
            count = std::stoul(t.rows[k][cc]);
        } catch (const std::exception&) {
            throw DataError(where + ": non-integer field");
        }
        if (d >= r.bow.rows() || term >= r.vocab.size() || count == 0)
            throw DataError(where + ": index out of range or zero count");
        r.bow.counts[d].push_back({static_cast<std::uint32_t>(term), static_cast<std::uint32_t>(count)});
    }
    for (std::size_t d = 0; d < r.bow.rows(); ++d) {
        auto& row = r.bow.counts[d];
        std::sort(row.begin(), row.end(), [](auto a, auto b) { return a.term < b.term; });
        if (row.empty())
            r.empty_docs.push_back(r.bow.doc_order[d]);
    }
    return r;
}

} // namespace nid
