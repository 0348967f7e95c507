#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "fsck/error.hpp"
#include "fsck/kdist.hpp"
#include "fsck/mlp.hpp"
#include "fsck/parallel.hpp"
#include "fsck/quadrature.hpp"
#include "fsck/spectra.hpp"
#include "fsck/train.hpp"

namespace fsck {

/// Discrete value sets of the training envelope.
namespace table1 {

inline std::vector<double> temperatures() {
    std::vector<double> t;
    for (int i = 3; i <= 30; ++i)
        t.push_back(100.0 * i);
    return t;
}

inline std::vector<double> co2_h2o_fractions() {
    std::vector<double> x;
    for (int i = 0; i <= 10; ++i)
        x.push_back(0.005 * i);
    for (double v : {0.1, 0.15, 0.2, 0.25, 0.5, 0.75, 1.0})
        x.push_back(v);
    return x;
}

inline std::vector<double> co_fractions() {
    std::vector<double> x;
    for (int i = 0; i <= 5; ++i)
        x.push_back(0.01 * i);
    for (double v : {0.1, 0.25, 0.5})
        x.push_back(v);
    return x;
}

} // namespace table1

/// One state of the corpus plus its reference temperature.
struct StateSample {
    ThermoState state;
    double t0 = 0.0;

    friend bool operator==(const StateSample&, const StateSample&) = default;
};

/// Uniform draws from the Table-1 value sets. Compositions summing above one
/// are redrawn; so is the all-zero mixture, which has no k-distribution.
inline std::vector<StateSample> sample_states(std::size_t n, std::uint64_t seed) {
    const auto ts = table1::temperatures();
    const auto xs = table1::co2_h2o_fractions();
    const auto xc = table1::co_fractions();
    std::mt19937_64 rng(seed);
    auto pick = [&](const std::vector<double>& v) {
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    };
    std::vector<StateSample> out;
    out.reserve(n);
    while (out.size() < n) {
        StateSample s;
        s.state.temperature = pick(ts);
        s.t0 = pick(ts);
        s.state.x_co2 = pick(xs);
        s.state.x_h2o = pick(xs);
        s.state.x_co = pick(xc);
        const double sum = s.state.total_absorber();
        if (sum > 1.0 || sum == 0.0)
            continue;
        out.push_back(s);
    }
    return out;
}

struct TrainingRow {
    double t, t0, x_co2, x_h2o, x_co, g, k, ka;

    friend bool operator==(const TrainingRow&, const TrainingRow&) = default;
};

/// Labels every state at every node. Parallel over states; rows come out in
/// state order, then node order, whatever the thread count.
inline std::vector<TrainingRow> label_states(std::span<const StateSample> samples, const QuadratureSet& quad,
                                             SpectrumCache& cache, unsigned threads = 0) {
    const std::size_t nn = quad.size();
    std::vector<TrainingRow> rows(samples.size() * nn);
    parallel_for(
        samples.size(),
        [&](std::size_t i) {
            const auto& s = samples[i];
            try {
                const auto nodes = kdist_at_state(s.state, s.t0, quad, cache);
                for (std::size_t j = 0; j < nn; ++j) {
                    const auto& v = nodes[j];
                    rows[i * nn + j] = {s.state.temperature, s.t0, s.state.x_co2, s.state.x_h2o, s.state.x_co,
                                        v.g, v.kstar, v.ka};
                }
            } catch (const Error& e) {
                std::ostringstream os;
                os.precision(17);
                os << "labeling failed for " << describe(s.state) << ", T0=" << s.t0 << ": " << e.what();
                throw Error(e.kind(), os.str());
            }
        },
        threads);
    return rows;
}

inline constexpr const char* corpus_header = "T,T0,xco2,xh2o,xco,g,k,ka";

inline void write_corpus(std::span<const TrainingRow> rows, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorKind::io, "cannot open " + path + " for writing");
    out.precision(17);
    out << corpus_header << '\n';
    for (const auto& r : rows)
        out << r.t << ',' << r.t0 << ',' << r.x_co2 << ',' << r.x_h2o << ',' << r.x_co << ',' << r.g << ','
            << r.k << ',' << r.ka << '\n';
    if (!out)
        throw Error(ErrorKind::io, "write failed for " + path);
}

/// Reads and validates a corpus. When quad is given every g must be one of
/// its nodes.
inline std::vector<TrainingRow> read_corpus(const std::string& path, const QuadratureSet* quad = nullptr) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::io, "cannot open " + path);
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::vector<TrainingRow> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (detail::trim(line).empty())
            continue;
        const std::string where = path + ":" + std::to_string(lineno) + ": ";
        if (!header) {
            if (detail::trim(line) != corpus_header)
                throw Error(ErrorKind::format, where + "expected header " + corpus_header);
            header = true;
            continue;
        }
        const auto cells = detail::split_csv(line);
        double v[8];
        if (cells.size() != 8)
            throw Error(ErrorKind::parse, where + "expected 8 columns");
        for (int c = 0; c < 8; ++c)
            if (!detail::parse_double(cells[static_cast<std::size_t>(c)], v[c]) || !std::isfinite(v[c]))
                throw Error(ErrorKind::parse, where + "column " + std::to_string(c + 1) + " is not a finite number");
        TrainingRow r{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
        try {
            require_in_envelope(ThermoState{r.t, r.x_co2, r.x_h2o, r.x_co});
            require_temperature(r.t0, "reference temperature");
        } catch (const Error& e) {
            throw Error(ErrorKind::validation, where + e.what());
        }
        if (!(r.g > 0.0 && r.g < 1.0))
            throw Error(ErrorKind::validation, where + "g outside (0,1)");
        if (quad && std::find(quad->nodes.begin(), quad->nodes.end(), r.g) == quad->nodes.end())
            throw Error(ErrorKind::validation, where + "g is not a node of the declared quadrature");
        if (!(r.k > 0.0) || !(r.ka > 0.0))
            throw Error(ErrorKind::validation, where + "k and ka must be positive");
        rows.push_back(r);
    }
    if (!header)
        throw Error(ErrorKind::format, path + ": empty corpus file");
    if (rows.empty())
        throw Error(ErrorKind::validation, path + ": corpus has no rows");
    return rows;
}

/// Provenance written next to a corpus.
inline void write_manifest(const std::string& path, std::uint64_t seed, std::size_t n_states,
                           const QuadratureSet& quad, const SpectralGrid& grid, std::uint64_t catalog_seed) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorKind::io, "cannot open " + path + " for writing");
    out << "seed = " << seed << '\n'
        << "states = " << n_states << '\n'
        << "nodes = " << quad.size() << '\n'
        << "quadrature = gauss-chebyshev\n"
        << "grid = " << grid.to_string() << '\n'
        << "catalog_seed = " << catalog_seed << '\n';
}

/// Rows as raw model inputs and transformed targets.
inline Batch to_batch(const MlpModel& m, std::span<const TrainingRow> rows) {
    if (m.inputs() != sfm_inputs || m.outputs() != 2)
        throw Error(ErrorKind::validation, "to_batch expects a 6-input, 2-output model");
    Batch b;
    b.rows = rows.size();
    b.x.reserve(rows.size() * 6);
    b.y.reserve(rows.size() * 2);
    for (const auto& r : rows) {
        b.x.insert(b.x.end(), {r.t, r.t0, r.x_co2, r.x_h2o, r.x_co, r.g});
        b.y.push_back(encode_target(m, 0, r.k));
        b.y.push_back(encode_target(m, 1, r.ka));
    }
    return b;
}

} // namespace fsck
