#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nid/topics.hpp"

namespace nid {

struct WindowSpec {
    int w = 7; // documents, not days
};

struct SignalSeries {
    std::string source;
    std::vector<std::string> doc_ids;
    std::vector<Date> timestamps;
    std::vector<double> novelty; // bits; kMissing outside the valid range
    std::vector<double> transience;
    std::vector<double> resonance;
    std::size_t valid_begin = 0; // inclusive
    std::size_t valid_end = 0;   // exclusive

    std::size_t size() const { return doc_ids.size(); }
    bool valid(std::size_t j) const { return j >= valid_begin && j < valid_end; }
};

// Base-2 divergences.
double kld(std::span<const double> p, std::span<const double> q);
double jsd(std::span<const double> p, std::span<const double> q);

// kMissing when the window falls off the series.
double novelty(const Representations& series, std::size_t j, const WindowSpec& spec);
double transience(const Representations& series, std::size_t j, const WindowSpec& spec);

SignalSeries compute_signals(const Representations& series, const WindowSpec& spec);

// Splits a sorted stream by source; pooled mode yields one group named "all".
std::map<std::string, Representations> group_by_source(const Representations& reps, const SourceMap& sources,
                                                       bool per_source);

void write_signals(const std::filesystem::path& path, const SignalSeries& s);
SignalSeries read_signals(const std::filesystem::path& path);

} // namespace nid
