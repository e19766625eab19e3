#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nid/infodyn.hpp"

namespace nid {

struct FilterConfig {
    int n = 14;          // half-window; segments have 2n+1 points
    int order = 2;       // fixed order M, or the largest candidate when select is set
    bool select = false; // choose 1..order by adjusted R^2

    void validate() const;
    int segment_length() const { return 2 * n + 1; }
};

struct SegmentFit {
    std::size_t start_index = 0;
    int order = 0;
    std::vector<double> coefficients; // ascending powers of the local abscissa l = 1..2n+1
    std::vector<double> fitted;
    double gof = 0; // adjusted R^2
};

struct TrendSeries {
    std::vector<double> values; // kMissing where the input is missing
};

SegmentFit fit_segment(std::span<const double> signal, std::size_t start, const FilterConfig& cfg);

// Linear weights (1 - (l-1)/(L-1), (l-1)/(L-1)) over an overlap of L points.
std::vector<double> blend(std::span<const double> left, std::span<const double> right);
// Overlap of n+1 points between consecutive segments.
std::vector<double> stitch(const SegmentFit& left, const SegmentFit& right, int n);

TrendSeries adaptive_trend(std::span<const double> signal, const FilterConfig& cfg);

void write_trend(const std::filesystem::path& path, const SignalSeries& s, std::span<const double> signal,
                 const TrendSeries& trend);
void write_trend_meta(const std::filesystem::path& path, const FilterConfig& cfg);

} // namespace nid
