#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nid/topics.hpp"

namespace nid {

struct EventInjection {
    std::size_t start = 0;
    std::size_t length = 0;
    double strength = 0.7; // (0, 1]
};

// Defaults are the frozen calibration (docs/calibration.md).
struct StreamConfig {
    std::size_t n_docs = 400;
    int K = 20;
    std::uint64_t seed = 1;
    double base_drift = 0.25;  // scale of latent logit steps
    double noise = 0.1;        // per-document jitter
    double persistence = 0.72; // latent AR(1) coefficient; 1 gives a pure random walk
    int salience_period = 7;   // one salient document per period
    double quiet_salience = 0.17;
    double catastrophe_spread = 0.15; // logit sd of the catastrophe distribution
    double ramp = 0.06;               // event ramp-in/out as a fraction of its length
    double transient_gain = 4.2;      // in-event emphasis on one-off items
    std::optional<EventInjection> event;
    Date start_date = Date{std::chrono::year{2020} / 1 / 1};
    std::string source = "synth";

    void validate() const;
};

Representations generate(const StreamConfig& cfg);

// "baseline" / "event" per document index.
std::vector<std::string> ground_truth(const StreamConfig& cfg);

void write_labels(const std::filesystem::path& path, const std::vector<std::string>& labels);

} // namespace nid
