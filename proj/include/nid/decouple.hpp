#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nid/infodyn.hpp"

namespace nid {

struct SlopeFit {
    double beta0 = 0;
    double beta1 = 0;
    double stderr1 = 0;
    double r2 = 0;
    std::size_t n_points = 0;
};

// Pairs with a missing component are dropped before fitting.
SlopeFit ols_fit(std::span<const double> x, std::span<const double> y);

struct EventSpec {
    std::string name;
    Date date;
};

struct DetectConfig {
    double tau = 0.35;
    double floor = 0.2;
    int sliding_w = 21;
    int min_run = 7;

    void validate() const;
};

struct WindowFit {
    std::string label;
    std::size_t begin = 0; // document index range [begin, end)
    std::size_t end = 0;
    std::optional<Date> start_date;
    std::optional<Date> end_date;
    std::optional<SlopeFit> fit;
    std::string reason; // why fit is empty
    double score = kMissing;
    std::string verdict;
};

struct BaselineSummary {
    std::map<std::string, SlopeFit> per_source;
    double mean = kMissing;
    double sd = kMissing; // sample sd across sources, 0 for a single source
    Warnings excluded;
};

SlopeFit baseline_fit(const SignalSeries& s, Date cutoff);
BaselineSummary baseline_slopes(const std::map<std::string, SignalSeries>& signals, Date cutoff);

std::vector<WindowFit> event_window_slopes(const SignalSeries& s, const std::vector<EventSpec>& events);

// Fills score and verdict relative to a baseline slope.
void score_windows(std::vector<WindowFit>& windows, const SlopeFit& baseline, const DetectConfig& cfg);

struct Episode {
    std::size_t onset_index = 0;
    std::size_t end_index = 0;
    Date onset_date;
    Date end_date;
    double min_score = 0;
    std::size_t n_windows = 0;
};

struct DecouplingReport {
    SlopeFit baseline;
    std::vector<WindowFit> windows;
    std::vector<Episode> episodes;
};

DecouplingReport detect(const SignalSeries& s, Date baseline_cutoff, const DetectConfig& cfg);

void write_slope_report(const std::filesystem::path& path, const std::vector<WindowFit>& windows);
void write_episodes(const std::filesystem::path& path, const std::vector<Episode>& episodes);

std::vector<EventSpec> parse_events(const std::string& spec); // "Name:YYYY-MM-DD, ..."
void check_events_sorted(const std::vector<EventSpec>& events);

} // namespace nid
