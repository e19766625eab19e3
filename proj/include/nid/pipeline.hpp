#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nid/config.hpp"

namespace nid {

namespace fs = std::filesystem;

struct SignalFile {
    std::string source;
    fs::path path;
};

std::string safe_name(const std::string& source);
std::vector<SignalFile> read_signal_index(const fs::path& signals_dir);

// Each stage reads persisted inputs and writes its own directory.
void stage_ingest(const RunConfig& cfg, const fs::path& out, Warnings& warn);
void stage_represent(const RunConfig& cfg, const fs::path& out, Warnings& warn);
void stage_signals(const fs::path& representations, const fs::path& sources, const RunConfig& cfg,
                   const fs::path& out, Warnings& warn);
void stage_trend(const fs::path& signals_dir, const RunConfig& cfg, const fs::path& out);
void stage_slopes(const fs::path& signals_dir, const RunConfig& cfg, const fs::path& out, Warnings& warn);
void stage_detect(const fs::path& signals_dir, const RunConfig& cfg, const fs::path& out, Warnings& warn);
void stage_plot(const fs::path& signals_dir, const fs::path& trend_dir, const fs::path& slopes_dir,
                const RunConfig& cfg, const fs::path& out);

// Creates <out_base>/run-<UTC timestamp>[-k] and runs every stage into it.
fs::path run_pipeline(const RunConfig& cfg, const fs::path& out_base, Warnings& warn);

} // namespace nid
