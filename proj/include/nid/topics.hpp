#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nid/common.hpp"
#include "nid/ingest.hpp"

namespace nid {

struct LdaConfig {
    int K = 20;
    double alpha = 50.0 / 20; // conventional 50/K
    double beta = 0.01;
    int iterations = 1000;
    std::uint64_t seed = 1;

    static LdaConfig with_topics(int K)
    {
        LdaConfig c;
        c.K = K;
        c.alpha = 50.0 / K;
        return c;
    }
    void validate() const;
};

struct DocRepresentation {
    std::string doc_id;
    Date timestamp;
    std::vector<double> p;
};

using Representations = std::vector<DocRepresentation>;

// Single chain, theta from the final sample.
Representations fit_lda(const BowMatrix& bow, const Vocabulary& vocab, const LdaConfig& cfg,
                        Warnings* warnings = nullptr);

Representations load_representations(const std::filesystem::path& path);
void write_representations(const std::filesystem::path& path, const Representations& reps);

// doc_id -> source label sidecar ("doc_id,source").
using SourceMap = std::map<std::string, std::string>;
SourceMap load_sources(const std::filesystem::path& path);
void write_sources(const std::filesystem::path& path, const SourceMap& sources);

} // namespace nid
