#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nid/decouple.hpp"
#include "nid/synth.hpp"
#include "nid/topics.hpp"
#include "nid/trendfilter.hpp"

namespace nid {

// Flat "dotted.key = value" file; '#' starts a comment line.
class Config {
public:
    static Config load(const std::filesystem::path& path);
    static Config parse(const std::string& text, const std::string& origin = "<config>");

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    const std::map<std::string, std::string>& values() const { return values_; }
    std::string dump() const;

    // Relative paths in the file resolve against this directory.
    std::filesystem::path base_dir;

private:
    std::map<std::string, std::string> values_;
};

enum class InputMode { corpus, representations, synth };

struct RunConfig {
    InputMode mode = InputMode::synth;
    std::filesystem::path corpus;
    std::filesystem::path stopwords;
    std::filesystem::path stem_map;
    std::filesystem::path representations;
    std::filesystem::path sources;
    LdaConfig lda;
    WindowSpec window;
    bool per_source = true;
    FilterConfig filter;
    DetectConfig detect;
    std::optional<Date> baseline_cutoff;
    std::vector<EventSpec> events;
    StreamConfig synth;
    std::uint64_t seed = 1;

    static RunConfig from(const Config& c);
    Config to_config() const;
    void set_seed(std::uint64_t s);
    // Explicit cutoff, else the first event, else none.
    std::optional<Date> resolved_cutoff() const;
};

} // namespace nid
