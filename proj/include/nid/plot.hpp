#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nid/decouple.hpp"
#include "nid/infodyn.hpp"

namespace nid {

namespace fs = std::filesystem;

// Annotation fields are kept as the strings found in the report CSVs.
struct SlopeRow {
    std::string label, start_date, end_date, beta0, beta1;
};

struct BaselineRow {
    std::string source, beta1;
};

std::vector<SlopeRow> read_slope_rows(const fs::path& path);

// Novelty and resonance panels with trends and event markers, then per-window scatter with fits.
void render_source_figure(const fs::path& path, const std::string& title, const SignalSeries& s,
                          const std::vector<double>& novelty_trend, const std::vector<double>& resonance_trend,
                          const std::vector<SlopeRow>& slopes, const std::vector<EventSpec>& events);

void render_baseline_figure(const fs::path& path, const std::vector<BaselineRow>& rows, const std::string& mean,
                            const std::string& sd);

} // namespace nid
