#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nid/decouple.hpp"
#include "nid/infodyn.hpp"
#include "nid/synth.hpp"
#include "nid/topics.hpp"
#include "nid/trendfilter.hpp"

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

const nid::Date kEpoch{std::chrono::year{2000} / 1 / 1};

std::vector<double> to_vec(const Array& a)
{
    if (a.ndim() != 1)
        throw py::value_error("expected a 1-d array");
    return {a.data(), a.data() + a.size()};
}

Array to_array(const std::vector<double>& v)
{
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

nid::Representations rows_to_reps(const Array& m)
{
    if (m.ndim() != 2)
        throw py::value_error("expected an (n, K) array");
    nid::Representations reps(m.shape(0));
    for (py::ssize_t j = 0; j < m.shape(0); ++j) {
        reps[j].doc_id = std::to_string(j);
        reps[j].timestamp = kEpoch + std::chrono::days{j};
        reps[j].p.assign(m.data(j, 0), m.data(j, 0) + m.shape(1));
    }
    return reps;
}

nid::SignalSeries arrays_to_series(const Array& novelty, const Array& resonance)
{
    nid::SignalSeries s;
    s.novelty = to_vec(novelty);
    s.resonance = to_vec(resonance);
    if (s.novelty.size() != s.resonance.size())
        throw py::value_error("novelty and resonance lengths differ");
    s.transience.assign(s.novelty.size(), nid::kMissing);
    for (std::size_t j = 0; j < s.novelty.size(); ++j) {
        s.doc_ids.push_back(std::to_string(j));
        s.timestamps.push_back(kEpoch + std::chrono::days{static_cast<long>(j)});
    }
    s.valid_end = s.size();
    return s;
}

py::dict fit_dict(const nid::SlopeFit& f)
{
    py::dict d;
    d["beta0"] = f.beta0;
    d["beta1"] = f.beta1;
    d["stderr1"] = f.stderr1;
    d["r2"] = f.r2;
    d["n_points"] = f.n_points;
    return d;
}

} // namespace

PYBIND11_MODULE(_nid, m)
{
    m.doc() = "Novelty, resonance and decoupling detection over topic streams";

    py::register_exception<nid::UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<nid::DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<nid::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("kld", [](const Array& p, const Array& q) { return nid::kld(to_vec(p), to_vec(q)); }, py::arg("p"),
          py::arg("q"));
    m.def("jsd", [](const Array& p, const Array& q) { return nid::jsd(to_vec(p), to_vec(q)); }, py::arg("p"),
          py::arg("q"));

    m.def(
        "compute_signals",
        [](const Array& rows, int w) {
            auto s = nid::compute_signals(rows_to_reps(rows), nid::WindowSpec{w});
            py::dict d;
            d["novelty"] = to_array(s.novelty);
            d["transience"] = to_array(s.transience);
            d["resonance"] = to_array(s.resonance);
            d["valid_begin"] = s.valid_begin;
            d["valid_end"] = s.valid_end;
            return d;
        },
        py::arg("rows"), py::arg("w") = 7, "Windowed signals for an (n, K) array of probability rows.");

    m.def(
        "adaptive_trend",
        [](const Array& signal, int n, int order, bool select) {
            nid::FilterConfig cfg{n, order, select};
            auto v = to_vec(signal);
            return to_array(nid::adaptive_trend(v, cfg).values);
        },
        py::arg("signal"), py::arg("n") = 14, py::arg("order") = 2, py::arg("select") = false);

    m.def(
        "ols_fit", [](const Array& x, const Array& y) { return fit_dict(nid::ols_fit(to_vec(x), to_vec(y))); },
        py::arg("x"), py::arg("y"));

    m.def(
        "detect",
        [](const Array& novelty, const Array& resonance, std::size_t cutoff, double tau, double floor, int sliding_w,
           int min_run) {
            auto s = arrays_to_series(novelty, resonance);
            nid::DetectConfig cfg{tau, floor, sliding_w, min_run};
            auto rep = nid::detect(s, kEpoch + std::chrono::days{static_cast<long>(cutoff)}, cfg);
            py::list scores, episodes;
            for (const auto& w : rep.windows)
                scores.append(w.score);
            for (const auto& e : rep.episodes)
                episodes.append(py::make_tuple(e.onset_index, e.end_index, e.min_score, e.n_windows));
            py::dict d;
            d["baseline"] = fit_dict(rep.baseline);
            d["scores"] = scores;
            d["episodes"] = episodes;
            return d;
        },
        py::arg("novelty"), py::arg("resonance"), py::arg("cutoff"), py::arg("tau") = 0.35, py::arg("floor") = 0.2,
        py::arg("sliding_w") = 21, py::arg("min_run") = 7,
        "Sliding-window detection; documents before index `cutoff` form the baseline.");

    m.def(
        "generate",
        [](std::size_t n_docs, int K, std::uint64_t seed, std::optional<std::tuple<std::size_t, std::size_t, double>> event) {
            nid::StreamConfig cfg;
            cfg.n_docs = n_docs;
            cfg.K = K;
            cfg.seed = seed;
            if (event)
                cfg.event = nid::EventInjection{std::get<0>(*event), std::get<1>(*event), std::get<2>(*event)};
            auto reps = nid::generate(cfg);
            py::array_t<double> out({static_cast<py::ssize_t>(n_docs), static_cast<py::ssize_t>(K)});
            auto r = out.mutable_unchecked<2>();
            for (std::size_t j = 0; j < n_docs; ++j)
                for (int k = 0; k < K; ++k)
                    r(j, k) = reps[j].p[k];
            return out;
        },
        py::arg("n_docs") = 400, py::arg("K") = 20, py::arg("seed") = 1, py::arg("event") = py::none(),
        "Synthetic stream with the calibrated defaults; event is (start, length, strength).");

    m.def(
        "fit_lda",
        [](const std::vector<std::vector<std::string>>& docs, int K, int iterations, std::uint64_t seed,
           std::optional<double> alpha, double beta) {
            std::vector<nid::Document> ds(docs.size());
            for (std::size_t d = 0; d < docs.size(); ++d) {
                char id[16];
                std::snprintf(id, sizeof id, "%08zu", d);
                ds[d].id = id;
                ds[d].timestamp = kEpoch;
                ds[d].tokens = docs[d];
            }
            auto bow = nid::build_bow(ds);
            auto cfg = nid::LdaConfig::with_topics(K);
            cfg.iterations = iterations;
            cfg.seed = seed;
            cfg.beta = beta;
            if (alpha)
                cfg.alpha = *alpha;
            auto reps = nid::fit_lda(bow.bow, bow.vocab, cfg);
            py::array_t<double> out({static_cast<py::ssize_t>(reps.size()), static_cast<py::ssize_t>(K)});
            auto r = out.mutable_unchecked<2>();
            for (std::size_t j = 0; j < reps.size(); ++j)
                for (int k = 0; k < K; ++k)
                    r(j, k) = reps[j].p[k];
            return out;
        },
        py::arg("docs"), py::arg("K") = 20, py::arg("iterations") = 1000, py::arg("seed") = 1,
        py::arg("alpha") = py::none(), py::arg("beta") = 0.01, "Collapsed Gibbs LDA over token lists.");
}
