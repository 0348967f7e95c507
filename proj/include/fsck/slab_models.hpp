#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fsck/error.hpp"
#include "fsck/kdist.hpp"
#include "fsck/lookup.hpp"
#include "fsck/mlp.hpp"
#include "fsck/parallel.hpp"
#include "fsck/quadrature.hpp"
#include "fsck/rte.hpp"
#include "fsck/spectra.hpp"

namespace fsck {

namespace detail {

inline SpectralSource blank_source(const std::string& name, const SlabProblem& p, const QuadratureSet& quad) {
    SpectralSource s;
    s.name = name;
    s.weights = quad.weights;
    s.k.assign(p.size(), std::vector<double>(quad.size(), 0.0));
    s.a.assign(p.size(), std::vector<double>(quad.size(), 1.0));
    return s;
}

} // namespace detail

/// k* and a from the exact stretch profile of every cell's spectrum.
inline SpectralSource exact_source(const SlabProblem& p, const QuadratureSet& quad, SpectrumCache& cache,
                                   unsigned threads = 0, const StretchWindow& window = {}) {
    p.validate();
    auto s = detail::blank_source("exact", p, quad);
    parallel_for(
        p.size(),
        [&](std::size_t i) {
            const auto& c = p.cells[i];
            const auto prof = stretch_exact(cache.spectrum(c), c.temperature, p.reference_temperature, quad, window);
            s.k[i] = prof.kstar;
            s.a[i] = prof.a;
        },
        threads);
    return s;
}

/// Finite-difference a-values from distributions sampled only at the
/// quadrature nodes, as a network with one output per node would supply.
inline SpectralSource discrete_source(const SlabProblem& p, const QuadratureSet& quad, SpectrumCache& cache,
                                      unsigned threads = 0) {
    p.validate();
    auto s = detail::blank_source("discrete" + std::to_string(quad.size()), p, quad);
    parallel_for(
        p.size(),
        [&](std::size_t i) {
            const auto& c = p.cells[i];
            const SpectralField field = cache.spectrum(c);
            const auto sorted = sort_spectrum(field);
            const auto d0 = detail::distribution_from_sorted(sorted, p.reference_temperature);
            const auto dt = detail::distribution_from_sorted(sorted, c.temperature);
            const auto kg0 = sample_kdist(d0, quad.nodes);
            const auto kgt = sample_kdist(dt, quad.nodes);
            const auto prof = stretch_discrete(kgt, kg0, quad.size());
            s.k[i] = prof.kstar;
            s.a[i] = prof.a;
        },
        threads);
    return s;
}

/// Network predictions; a = ka / k.
inline SpectralSource sfm_source(const SlabProblem& p, const QuadratureSet& quad, const MlpModel& model) {
    p.validate();
    auto s = detail::blank_source("sfm", p, quad);
    std::vector<double> in;
    in.reserve(p.size() * quad.size() * sfm_inputs);
    for (const auto& c : p.cells)
        for (double g : quad.nodes)
            in.insert(in.end(), {c.temperature, p.reference_temperature, c.x_co2, c.x_h2o, c.x_co, g});
    const auto out = forward_batch(model, in);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < quad.size(); ++j) {
            const double k = out[2 * (i * quad.size() + j)];
            const double ka = out[2 * (i * quad.size() + j) + 1];
            s.k[i][j] = k;
            s.a[i][j] = ka / k;
        }
    return s;
}

inline SpectralSource table_source(const SlabProblem& p, const FsckTable& table) {
    p.validate();
    auto s = detail::blank_source("table", p, table.quad);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto v = interp(table, p.cells[i], p.reference_temperature);
        for (std::size_t j = 0; j < v.size(); ++j) {
            // multilinear blends may leave ka > 0 with k == 0 at transparent corners
            s.k[i][j] = std::max(v[j].kstar, 0.0);
            s.a[i][j] = v[j].kstar > 0.0 ? std::max(v[j].ka, 0.0) / v[j].kstar : 1.0;
        }
    }
    return s;
}

/// Gray gas at each cell's Planck mean.
inline SpectralSource gray_source(const SlabProblem& p, const QuadratureSet& quad, SpectrumCache& cache,
                                  unsigned threads = 0) {
    p.validate();
    auto s = detail::blank_source("gray", p, quad);
    parallel_for(
        p.size(),
        [&](std::size_t i) {
            const double kp = planck_mean_lbl(cache.spectrum(p.cells[i]), p.cells[i].temperature);
            std::fill(s.k[i].begin(), s.k[i].end(), kp);
        },
        threads);
    return s;
}

inline std::vector<SpectralField> cell_spectra(const SlabProblem& p, SpectrumCache& cache) {
    std::vector<SpectralField> f;
    f.reserve(p.size());
    for (const auto& c : p.cells)
        f.push_back(cache.spectrum(c));
    return f;
}

/// Homogeneous isothermal slab.
inline SlabProblem uniform_slab(const ThermoState& state, double t0, double length, std::size_t cells) {
    SlabProblem p;
    p.length = length;
    p.reference_temperature = t0;
    p.cells.assign(cells, state);
    return p;
}

inline double snap_temperature(double t) {
    return std::clamp(std::round(t / 100.0) * 100.0, envelope::t_min, envelope::t_max);
}

/// Flame-like nonisothermal profile: a Gaussian hot zone over a cool
/// background, with products scaling with the local rise. Temperatures are
/// snapped to 100 K so spectra are shared between cells and profiles; T0 is
/// the snapped mean temperature.
inline SlabProblem random_profile(std::uint64_t seed, std::size_t cells = 20, double length = 0.5) {
    std::mt19937_64 rng(seed);
    auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    const double t_edge = uni(300.0, 900.0);
    const double t_peak = uni(1400.0, 2500.0);
    const double centre = uni(0.3, 0.7) * length;
    const double width = uni(0.12, 0.3) * length;
    const double h2o = uni(0.08, 0.2), co2 = uni(0.04, 0.12), co = uni(0.0, 0.05);

    SlabProblem p;
    p.length = length;
    const double dx = length / static_cast<double>(cells);
    double tsum = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        const double x = (static_cast<double>(i) + 0.5) * dx;
        const double f = std::exp(-std::pow((x - centre) / width, 2));
        ThermoState c;
        c.temperature = snap_temperature(t_edge + (t_peak - t_edge) * f);
        c.x_h2o = 0.01 + h2o * f;
        c.x_co2 = 0.005 + co2 * f;
        c.x_co = co * f;
        tsum += c.temperature;
        p.cells.push_back(c);
    }
    p.reference_temperature = snap_temperature(tsum / static_cast<double>(cells));
    return p;
}

} // namespace fsck
