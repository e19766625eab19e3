#include "nid/topics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <unordered_set>

#include "nid/csv.hpp"

namespace nid {

void LdaConfig::validate() const
{
    if (K < 2)
        throw UsageError("lda K must be >= 2");
    if (!(alpha > 0) || !(beta > 0))
        throw UsageError("lda alpha and beta must be positive");
    if (iterations < 1)
        throw UsageError("lda iterations must be >= 1");
}

Representations fit_lda(const BowMatrix& bow, const Vocabulary& vocab, const LdaConfig& cfg, Warnings* warnings)
{
    cfg.validate();
    const std::size_t D = bow.rows();
    if (D == 0)
        throw DataError("empty corpus");
    const int K = cfg.K;
    const std::size_t V = std::max<std::size_t>(vocab.size(), 1);

    std::vector<std::vector<std::uint32_t>> words(D);
    bool any = false;
    for (std::size_t d = 0; d < D; ++d) {
        for (const auto& e : bow.counts[d]) {
            if (e.term >= V)
                throw DataError("term index out of vocabulary range");
            words[d].insert(words[d].end(), e.count, e.term);
        }
        if (words[d].empty()) {
            if (warnings)
                warnings->push_back("document '" + bow.doc_order[d] + "' has no tokens; uniform topic vector");
        } else {
            any = true;
        }
    }
    if (!any)
        throw DataError("corpus has no tokens");
    if (static_cast<std::size_t>(K) > D && warnings)
        warnings->push_back("K=" + std::to_string(K) + " exceeds document count " + std::to_string(D));

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, K - 1);

    std::vector<std::vector<int>> z(D);
    std::vector<std::int64_t> ndk(D * K, 0), nkw(K * V, 0), nk(K, 0);
    for (std::size_t d = 0; d < D; ++d) {
        z[d].resize(words[d].size());
        for (std::size_t i = 0; i < words[d].size(); ++i) {
            int k = pick(rng);
            z[d][i] = k;
            ++ndk[d * K + k];
            ++nkw[k * V + words[d][i]];
            ++nk[k];
        }
    }

    const double Vbeta = V * cfg.beta;
    std::vector<double> cum(K);
    for (int it = 0; it < cfg.iterations; ++it) {
        for (std::size_t d = 0; d < D; ++d) {
            for (std::size_t i = 0; i < words[d].size(); ++i) {
                const auto w = words[d][i];
                int k = z[d][i];
                --ndk[d * K + k];
                --nkw[k * V + w];
                --nk[k];
                double total = 0;
                for (int t = 0; t < K; ++t) {
                    total += (ndk[d * K + t] + cfg.alpha) * (nkw[t * V + w] + cfg.beta) / (nk[t] + Vbeta);
                    cum[t] = total;
                }
                double u = unif(rng) * total;
                k = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
                if (k >= K)
                    k = K - 1;
                z[d][i] = k;
                ++ndk[d * K + k];
                ++nkw[k * V + w];
                ++nk[k];
            }
        }
    }

    Representations out(D);
    for (std::size_t d = 0; d < D; ++d) {
        out[d].doc_id = bow.doc_order[d];
        out[d].timestamp = bow.dates[d];
        out[d].p.resize(K);
        const double denom = words[d].size() + K * cfg.alpha;
        for (int k = 0; k < K; ++k)
            out[d].p[k] = (ndk[d * K + k] + cfg.alpha) / denom;
    }
    return out;
}

Representations load_representations(const std::filesystem::path& path)
{
    auto t = csv::read(path);
    if (t.header.size() < 4 || t.header[0] != "doc_id" || t.header[1] != "date")
        throw DataError(path.string() + ": header must be doc_id,date,t0,...,t{K-1} with K >= 2");
    const std::size_t K = t.header.size() - 2;
    for (std::size_t k = 0; k < K; ++k)
        if (t.header[k + 2] != "t" + std::to_string(k))
            throw DataError(path.string() + ": unexpected column '" + t.header[k + 2] + "'");

    Representations out;
    std::unordered_set<std::string> seen;
    for (const auto& row : t.rows) {
        DocRepresentation r;
        r.doc_id = row[0];
        if (r.doc_id.empty())
            throw DataError(path.string() + ": empty doc_id");
        if (!seen.insert(r.doc_id).second)
            throw DataError("duplicate doc_id '" + r.doc_id + "'");
        if (!try_parse_date(row[1], r.timestamp))
            throw DataError("doc '" + r.doc_id + "': unparseable date '" + row[1] + "'");
        r.p.resize(K);
        double sum = 0;
        for (std::size_t k = 0; k < K; ++k) {
            const auto& f = row[k + 2];
            char* end = nullptr;
            double v = std::strtod(f.c_str(), &end);
            if (f.empty() || end != f.c_str() + f.size() || !std::isfinite(v))
                throw DataError("doc '" + r.doc_id + "': invalid probability '" + f + "'");
            if (!(v > 0))
                throw DataError("doc '" + r.doc_id + "': non-positive component t" + std::to_string(k));
            r.p[k] = v;
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-6)
            throw DataError("doc '" + r.doc_id + "': components sum to " + format_report(sum) + ", not 1");
        for (auto& v : r.p)
            v /= sum;
        out.push_back(std::move(r));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.doc_id < b.doc_id;
    });
    return out;
}

void write_representations(const std::filesystem::path& path, const Representations& reps)
{
    std::ofstream os(path);
    if (!os)
        throw DataError("cannot write " + path.string());
    const std::size_t K = reps.empty() ? 0 : reps.front().p.size();
    csv::Row header{"doc_id", "date"};
    for (std::size_t k = 0; k < K; ++k)
        header.push_back("t" + std::to_string(k));
    csv::write_row(os, header);
    for (const auto& r : reps) {
        if (r.p.size() != K)
            throw DataError("inconsistent K at doc '" + r.doc_id + "'");
        csv::Row row{r.doc_id, format_date(r.timestamp)};
        for (double v : r.p)
            row.push_back(format_exact(v));
        csv::write_row(os, row);
    }
}

SourceMap load_sources(const std::filesystem::path& path)
{
    auto t = csv::read(path);
    auto ci = csv::column(t, "doc_id", path), cs = csv::column(t, "source", path);
    SourceMap out;
    for (const auto& row : t.rows)
        out[row[ci]] = row[cs];
    return out;
}

void write_sources(const std::filesystem::path& path, const SourceMap& sources)
{
    std::ofstream os(path);
    if (!os)
        throw DataError("cannot write " + path.string());
    csv::write_row(os, {"doc_id", "source"});
    for (const auto& [id, src] : sources)
        csv::write_row(os, {id, src});
}

} // namespace nid
