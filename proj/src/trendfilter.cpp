#include "nid/trendfilter.hpp"

#include <Eigen/Dense>
#include <fstream>

#include "nid/csv.hpp"

namespace nid {

namespace {

struct PolyFit {
    Eigen::VectorXd coef;
    Eigen::VectorXd fitted;
    double adj_r2 = 0;
};

PolyFit fit_poly(const Eigen::VectorXd& y, int order)
{
    const auto m = y.size();
    Eigen::MatrixXd A(m, order + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
        double l = static_cast<double>(i + 1), v = 1.0;
        for (int k = 0; k <= order; ++k, v *= l)
            A(i, k) = v;
    }
    PolyFit f;
    f.coef = A.colPivHouseholderQr().solve(y);
    f.fitted = A * f.coef;
    const double sse = (y - f.fitted).squaredNorm();
    const double sst = (y.array() - y.mean()).matrix().squaredNorm();
    const double r2 = sst > 0 ? 1.0 - sse / sst : 1.0;
    f.adj_r2 = 1.0 - (1.0 - r2) * (m - 1.0) / (m - order - 1.0);
    return f;
}

} // namespace

void FilterConfig::validate() const
{
    if (n < 2)
        throw UsageError("filter n must be >= 2");
    if (order < 1)
        throw UsageError("filter order must be >= 1");
    if (segment_length() < order + 2)
        throw UsageError("segment length 2n+1 too short for order " + std::to_string(order));
}

SegmentFit fit_segment(std::span<const double> signal, std::size_t start, const FilterConfig& cfg)
{
    cfg.validate();
    const auto len = static_cast<std::size_t>(cfg.segment_length());
    if (start + len > signal.size())
        throw DataError("segment at " + std::to_string(start) + " runs past the signal end");
    Eigen::VectorXd y(len);
    for (std::size_t i = 0; i < len; ++i) {
        if (is_missing(signal[start + i]))
            throw DataError("segment at " + std::to_string(start) + " contains missing values");
        y[i] = signal[start + i];
    }

    int lo = cfg.select ? 1 : cfg.order;
    PolyFit best;
    int best_order = 0;
    for (int m = lo; m <= cfg.order; ++m) {
        auto f = fit_poly(y, m);
        if (best_order == 0 || f.adj_r2 > best.adj_r2) {
            best = std::move(f);
            best_order = m;
        }
    }
    SegmentFit out;
    out.start_index = start;
    out.order = best_order;
    out.coefficients.assign(best.coef.data(), best.coef.data() + best.coef.size());
    out.fitted.assign(best.fitted.data(), best.fitted.data() + best.fitted.size());
    out.gof = best.adj_r2;
    return out;
}

std::vector<double> blend(std::span<const double> left, std::span<const double> right)
{
    if (left.size() != right.size() || left.size() < 2)
        throw DataError("stitch: overlap lengths differ or are shorter than 2");
    const std::size_t L = left.size();
    std::vector<double> out(L);
    for (std::size_t i = 0; i < L; ++i) {
        const double w2 = static_cast<double>(i) / static_cast<double>(L - 1);
        const double w1 = 1.0 - w2;
        out[i] = w1 * left[i] + w2 * right[i];
    }
    return out;
}

std::vector<double> stitch(const SegmentFit& left, const SegmentFit& right, int n)
{
    const auto len = static_cast<std::size_t>(2 * n + 1);
    if (n < 1 || left.fitted.size() != len || right.fitted.size() != len)
        throw DataError("stitch: segments must both have 2n+1 fitted values");
    return blend(std::span<const double>(left.fitted).subspan(n, n + 1),
                 std::span<const double>(right.fitted).subspan(0, n + 1));
}

TrendSeries adaptive_trend(std::span<const double> signal, const FilterConfig& cfg)
{
    cfg.validate();
    const std::size_t N = signal.size();
    std::size_t b = 0;
    while (b < N && is_missing(signal[b]))
        ++b;
    std::size_t e = N;
    while (e > b && is_missing(signal[e - 1]))
        --e;
    for (std::size_t j = b; j < e; ++j)
        if (is_missing(signal[j]))
            throw DataError("signal has missing values inside its valid range (index " + std::to_string(j) + ")");
    const auto len = static_cast<std::size_t>(cfg.segment_length());
    const auto n = static_cast<std::size_t>(cfg.n);
    if (e - b < len)
        throw DataError("valid range of " + std::to_string(e - b) + " points is shorter than 2n+1 = " +
                        std::to_string(len));

    std::vector<std::size_t> starts;
    for (std::size_t s = b; s + len <= e; s += n)
        starts.push_back(s);
    if (starts.back() + len < e)
        starts.push_back(e - len); // anchored tail segment

    TrendSeries out;
    out.values.assign(N, kMissing);
    std::size_t covered = b; // one past the last index written
    for (std::size_t s : starts) {
        auto fit = fit_segment(signal, s, cfg);
        if (covered > s) {
            // The running trend is the left curve; on regular n+1 overlaps it equals the previous segment.
            std::span<const double> left(out.values.data() + s, covered - s);
            std::span<const double> right(fit.fitted.data(), covered - s);
            auto mixed = blend(left, right);
            std::copy(mixed.begin(), mixed.end(), out.values.begin() + s);
        }
        for (std::size_t j = std::max(covered, s); j < s + len; ++j)
            out.values[j] = fit.fitted[j - s];
        covered = s + len;
    }
    return out;
}

void write_trend(const std::filesystem::path& path, const SignalSeries& s, std::span<const double> signal,
                 const TrendSeries& trend)
{
    if (signal.size() != s.size() || trend.values.size() != s.size())
        throw DataError("trend output misaligned with its signal series");
    std::ofstream os(path);
    if (!os)
        throw DataError("cannot write " + path.string());
    csv::write_row(os, {"doc_id", "date", "signal", "trend"});
    for (std::size_t j = 0; j < s.size(); ++j)
        csv::write_row(os, {s.doc_ids[j], format_date(s.timestamps[j]), format_exact(signal[j]),
                            format_exact(trend.values[j])});
}

void write_trend_meta(const std::filesystem::path& path, const FilterConfig& cfg)
{
    std::ofstream os(path);
    if (!os)
        throw DataError("cannot write " + path.string());
    os << "trend.n=" << cfg.n << "\n"
       << "trend.segment_length=" << cfg.segment_length() << "\n"
       << "trend.overlap=" << cfg.n + 1 << "\n"
       << "trend.order_policy=" << (cfg.select ? "select" : "fixed") << "\n"
       << "trend.order=" << cfg.order << "\n"
       << "trend.abscissa=local 1..2n+1\n";
}

} // namespace nid
