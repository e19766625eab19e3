#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nid/common.hpp"

namespace nid {

struct Document {
    std::string id;
    Date timestamp;
    std::string source;
    std::string raw_text;
    std::vector<std::string> tokens;
};

struct Vocabulary {
    std::vector<std::string> terms;
    std::unordered_map<std::string, std::uint32_t> index;

    std::size_t size() const { return terms.size(); }
};

struct BowEntry {
    std::uint32_t term;
    std::uint32_t count;
};

struct BowMatrix {
    std::vector<std::vector<BowEntry>> counts; // entries sorted by term
    std::vector<std::string> doc_order;
    std::vector<Date> dates;
    std::vector<std::string> sources;

    std::size_t rows() const { return counts.size(); }
    std::uint64_t row_total(std::size_t d) const;
};

using StopWords = std::unordered_set<std::string>;
using StemMap = std::unordered_map<std::string, std::string>;

// JSONL with id, date, source, text (optional title is prepended to text).
std::vector<Document> parse_corpus(const std::filesystem::path& path);

std::string casefold(std::string_view utf8);
std::vector<std::string> tokenize(std::string_view utf8);
bool is_numeral(std::string_view token);

Document normalize(const Document& doc, const StopWords& stopwords, const StemMap& stem_map);

struct BowResult {
    Vocabulary vocab;
    BowMatrix bow;
    Warnings empty_docs; // ids of documents without tokens
};

BowResult build_bow(const std::vector<Document>& docs);

StopWords load_stopwords(const std::filesystem::path& path);
StemMap load_stem_map(const std::filesystem::path& path);

// bow.csv, vocab.txt and docs.csv inside dir.
void write_bow(const std::filesystem::path& dir, const Vocabulary& vocab, const BowMatrix& bow);
BowResult read_bow(const std::filesystem::path& dir);

} // namespace nid
