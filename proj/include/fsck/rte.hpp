#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <span>
#include <string>
#include <vector>

#include "fsck/error.hpp"
#include "fsck/expint.hpp"
#include "fsck/parallel.hpp"
#include "fsck/planck.hpp"
#include "fsck/spectra.hpp"
#include "fsck/thermo_state.hpp"

namespace fsck {

/// 1-D slab of uniform cells between black walls. Wall temperature 0 means
/// a cold wall.
struct SlabProblem {
    double length = 1.0; // m
    std::vector<ThermoState> cells;
    double reference_temperature = 1000.0; // T0 for the correlated models
    double wall_temperature_0 = 0.0;
    double wall_temperature_l = 0.0;

    std::size_t size() const { return cells.size(); }
    double dx() const { return length / static_cast<double>(cells.size()); }

    void validate() const {
        if (!(length > 0.0) || !std::isfinite(length))
            throw Error(ErrorKind::validation, "slab length must be positive");
        if (cells.size() < 2)
            throw Error(ErrorKind::validation, "slab needs at least 2 cells");
        for (const auto& c : cells)
            if (!std::isfinite(c.temperature) || !(c.temperature > 0.0) || !std::isfinite(c.total_absorber()))
                throw Error(ErrorKind::validation, "non-finite or non-positive slab profile value");
        if (!(wall_temperature_0 >= 0.0) || !(wall_temperature_l >= 0.0))
            throw Error(ErrorKind::validation, "wall temperatures must be non-negative");
    }
};

/// Per-cell, per-node k* (cm^-1) and stretch factor a, plus node weights.
/// wall_a scales the wall blackbody intensity in each node.
struct SpectralSource {
    std::string name;
    std::vector<double> weights;
    std::vector<std::vector<double>> k; // [cell][node]
    std::vector<std::vector<double>> a; // [cell][node]
    std::vector<double> wall_a0, wall_al;

    std::size_t nodes() const { return weights.size(); }

    void validate(std::size_t cells) const {
        if (k.size() != cells || a.size() != cells)
            throw Error(ErrorKind::validation, "spectral source does not cover every cell");
        for (std::size_t i = 0; i < cells; ++i) {
            if (k[i].size() != nodes() || a[i].size() != nodes())
                throw Error(ErrorKind::validation, "spectral source node count mismatch");
            for (std::size_t j = 0; j < nodes(); ++j) {
                if (!(k[i][j] >= 0.0) || !std::isfinite(k[i][j]))
                    throw Error(ErrorKind::validation, "negative or non-finite k from source " + name);
                if (!(a[i][j] >= 0.0) || !std::isfinite(a[i][j]))
                    throw Error(ErrorKind::validation, "negative or non-finite a from source " + name);
            }
        }
    }
};

/// Fields on the slab: emission and divergence at cell centres, flux on
/// faces. divq > 0 means net emission.
struct RteSolution {
    std::string name;
    std::vector<double> x_center; // m
    std::vector<double> x_face;   // m
    std::vector<double> emission; // W/m^3
    std::vector<double> q;        // W/m^2, positive toward +x
    std::vector<double> divq;     // W/m^3

    /// q interpolated to cell centres.
    double q_center(std::size_t i) const { return 0.5 * (q[i] + q[i + 1]); }
};

namespace detail {

inline RteSolution empty_solution(const SlabProblem& p, const std::string& name) {
    RteSolution s;
    s.name = name;
    const std::size_t n = p.size();
    const double dx = p.dx();
    for (std::size_t i = 0; i < n; ++i)
        s.x_center.push_back((static_cast<double>(i) + 0.5) * dx);
    for (std::size_t f = 0; f <= n; ++f)
        s.x_face.push_back(static_cast<double>(f) * dx);
    s.emission.assign(n, 0.0);
    s.q.assign(n + 1, 0.0);
    s.divq.assign(n, 0.0);
    return s;
}

inline double wall_intensity(double t) { return t > 0.0 ? blackbody_intensity(t) : 0.0; }

/// Exact solution for one absorbing "gray" channel with piecewise-constant
/// cells. k in m^-1, source S (W m^-2 sr^-1 or per unit wavenumber) per
/// cell. Face flux and cell divergence are accumulated with weight w.
struct GraySlabWork {
    std::vector<double> tau, e3;
};

inline void exact_gray(std::span<const double> k, std::span<const double> s, double iw0, double iwl, double dx,
                       double w, std::span<double> q, std::span<double> divq, GraySlabWork& work) {
    const std::size_t n = k.size();
    auto& tau = work.tau;
    tau.resize(n + 1);
    tau[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        tau[i + 1] = tau[i] + k[i] * dx;
    if (!std::isfinite(tau[n]))
        throw Error(ErrorKind::numeric, "non-finite optical depth");
    // E3 of every face-to-face optical distance
    const std::size_t nf = n + 1;
    auto& e3 = work.e3;
    e3.resize(nf * nf);
    for (std::size_t a = 0; a < nf; ++a) {
        e3[a * nf + a] = 0.5;
        for (std::size_t b = a + 1; b < nf; ++b) {
            const double v = expint3(tau[b] - tau[a]);
            e3[a * nf + b] = v;
            e3[b * nf + a] = v;
        }
    }
    auto E = [&](std::size_t a, std::size_t b) { return e3[a * nf + b]; };
    constexpr double two_pi = 2.0 * phys::pi;
    const double taul = tau[n];

    for (std::size_t f = 0; f < nf; ++f) {
        double v = iw0 * E(f, 0) - iwl * E(n, f);
        for (std::size_t m = 0; m < f; ++m)
            v += s[m] * (E(f, m + 1) - E(f, m));
        for (std::size_t m = f; m < n; ++m)
            v -= s[m] * (E(m, f) - E(m + 1, f));
        q[f] += w * two_pi * v;
    }
    (void)taul;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = tau[i + 1] - tau[i];
        // integral of G over the cell in optical depth
        double g = iw0 * (E(i, 0) - E(i + 1, 0)) + iwl * (E(n, i + 1) - E(n, i));
        for (std::size_t m = 0; m < n; ++m) {
            double j;
            if (m == i)
                j = 2.0 * d - 1.0 + 2.0 * E(i, i + 1);
            else
                j = E(i, m + 1) - E(i, m) - E(i + 1, m + 1) + E(i + 1, m);
            g += s[m] * j;
        }
        g *= two_pi;
        divq[i] += w * (4.0 * phys::pi * s[i] * d - g) / dx;
    }
}

} // namespace detail

/// Correlated-k exact slab solution, node by node, with exponential-integral
/// kernels; the divergence comes from the analytic cell integral of G.
inline RteSolution solve_slab_exact(const SlabProblem& p, const SpectralSource& src) {
    p.validate();
    src.validate(p.size());
    const std::size_t n = p.size(), nn = src.nodes();
    RteSolution sol = detail::empty_solution(p, src.name);
    const double dx = p.dx();
    std::vector<double> ib(n);
    for (std::size_t i = 0; i < n; ++i)
        ib[i] = blackbody_intensity(p.cells[i].temperature);
    const double iw0 = detail::wall_intensity(p.wall_temperature_0);
    const double iwl = detail::wall_intensity(p.wall_temperature_l);

    detail::GraySlabWork work;
    std::vector<double> k(n), s(n);
    for (std::size_t j = 0; j < nn; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            k[i] = 100.0 * src.k[i][j];
            s[i] = src.a[i][j] * ib[i];
            sol.emission[i] += src.weights[j] * 4.0 * phys::pi * k[i] * s[i];
        }
        const double a0 = src.wall_a0.empty() ? 1.0 : src.wall_a0[j];
        const double al = src.wall_al.empty() ? 1.0 : src.wall_al[j];
        detail::exact_gray(k, s, a0 * iw0, al * iwl, dx, src.weights[j], sol.q, sol.divq, work);
    }
    return sol;
}

struct P1Options {
    double k_floor = 1e-12; // cm^-1
    std::function<void(const std::string&)> warn = [](const std::string& msg) {
        std::cerr << "warning: " << msg << '\n';
    };
};

/// P1 diffusion solution per node on the cell mesh with Marshak conditions
/// at black walls. The cell balance telescopes, so the divergence integrates
/// to the wall flux difference exactly.
inline RteSolution solve_slab_p1(const SlabProblem& p, const SpectralSource& src, const P1Options& opt = {}) {
    p.validate();
    src.validate(p.size());
    const std::size_t n = p.size(), nn = src.nodes();
    RteSolution sol = detail::empty_solution(p, src.name);
    const double dx = p.dx();
    const double iw0 = detail::wall_intensity(p.wall_temperature_0);
    const double iwl = detail::wall_intensity(p.wall_temperature_l);
    constexpr double four_pi = 4.0 * phys::pi;

    std::size_t floored = 0;
    std::vector<double> k(n), s(n), lower(n), diag(n), upper(n), rhs(n), g(n), face(n + 1);
    for (std::size_t j = 0; j < nn; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            double kc = src.k[i][j];
            if (kc < opt.k_floor) {
                kc = opt.k_floor;
                ++floored;
            }
            k[i] = 100.0 * kc;
            s[i] = src.a[i][j] * blackbody_intensity(p.cells[i].temperature);
            sol.emission[i] += src.weights[j] * four_pi * 100.0 * src.k[i][j] * s[i];
        }
        const double a0 = src.wall_a0.empty() ? 1.0 : src.wall_a0[j];
        const double al = src.wall_al.empty() ? 1.0 : src.wall_al[j];
        std::fill(lower.begin(), lower.end(), 0.0);
        std::fill(upper.begin(), upper.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            diag[i] = dx * k[i];
            rhs[i] = dx * k[i] * four_pi * s[i];
        }
        const double c0 = 1.0 / (2.0 + 1.5 * k[0] * dx);
        const double cl = 1.0 / (2.0 + 1.5 * k[n - 1] * dx);
        diag[0] += c0;
        rhs[0] += c0 * four_pi * a0 * iw0;
        diag[n - 1] += cl;
        rhs[n - 1] += cl * four_pi * al * iwl;
        std::vector<double> cond(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            cond[i] = 1.0 / (1.5 * (k[i] + k[i + 1]) * dx);
            diag[i] += cond[i];
            diag[i + 1] += cond[i];
            upper[i] = -cond[i];
            lower[i + 1] = -cond[i];
        }
        // Thomas algorithm
        std::vector<double> cp(n), dp(n);
        cp[0] = upper[0] / diag[0];
        dp[0] = rhs[0] / diag[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double m = diag[i] - lower[i] * cp[i - 1];
            cp[i] = upper[i] / m;
            dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / m;
        }
        g[n - 1] = dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;)
            g[i] = dp[i] - cp[i] * g[i + 1];

        face[0] = c0 * (four_pi * a0 * iw0 - g[0]);
        face[n] = -cl * (four_pi * al * iwl - g[n - 1]);
        for (std::size_t i = 0; i + 1 < n; ++i)
            face[i + 1] = -(g[i + 1] - g[i]) * cond[i];
        for (std::size_t f = 0; f <= n; ++f)
            sol.q[f] += src.weights[j] * face[f];
        for (std::size_t i = 0; i < n; ++i)
            sol.divq[i] += src.weights[j] * k[i] * (four_pi * s[i] - g[i]);
        for (double v : g)
            if (!std::isfinite(v))
                throw Error(ErrorKind::numeric, "P1 solve produced non-finite G");
    }
    if (floored > 0 && opt.warn)
        opt.warn("P1: " + std::to_string(floored) + " cell-node k values raised to the floor " +
                 std::to_string(opt.k_floor) + " cm^-1");
    return sol;
}

/// Spectrally resolved reference: the exact gray kernel at every wavenumber
/// of the cell spectra, summed with the grid spacing. fields[i] is cell i.
inline RteSolution solve_slab_lbl(const SlabProblem& p, std::span<const SpectralField> fields,
                                  unsigned threads = 0, std::size_t stride = 1) {
    p.validate();
    const std::size_t n = p.size();
    if (fields.size() != n)
        throw Error(ErrorKind::validation, "one spectral field per cell required");
    const std::size_t ne = fields[0].size();
    for (const auto& f : fields)
        if (f.size() != ne || f.step != fields[0].step)
            throw Error(ErrorKind::validation, "cell spectra must share one grid");
    if (stride == 0)
        stride = 1;
    RteSolution sol = detail::empty_solution(p, "lbl");
    const double dx = p.dx();
    const double dw = fields[0].step * static_cast<double>(stride);

    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(256, ne / stride));
    std::vector<std::vector<double>> cq(chunks, std::vector<double>(n + 1, 0.0));
    std::vector<std::vector<double>> cd(chunks, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> ce(chunks, std::vector<double>(n, 0.0));
    const std::size_t samples = (ne + stride - 1) / stride;
    parallel_for(
        chunks,
        [&](std::size_t c) {
            detail::GraySlabWork work;
            std::vector<double> k(n), s(n);
            const std::size_t lo = samples * c / chunks, hi = samples * (c + 1) / chunks;
            for (std::size_t si = lo; si < hi; ++si) {
                const std::size_t e = si * stride;
                const double eta = fields[0].eta[e];
                for (std::size_t i = 0; i < n; ++i) {
                    k[i] = 100.0 * fields[i].kappa[e];
                    s[i] = planck_intensity(p.cells[i].temperature, eta);
                    ce[c][i] += dw * 4.0 * phys::pi * k[i] * s[i];
                }
                const double iw0 = p.wall_temperature_0 > 0.0 ? planck_intensity(p.wall_temperature_0, eta) : 0.0;
                const double iwl = p.wall_temperature_l > 0.0 ? planck_intensity(p.wall_temperature_l, eta) : 0.0;
                detail::exact_gray(k, s, iw0, iwl, dx, dw, cq[c], cd[c], work);
            }
        },
        threads);
    for (std::size_t c = 0; c < chunks; ++c) {
        for (std::size_t f = 0; f <= n; ++f)
            sol.q[f] += cq[c][f];
        for (std::size_t i = 0; i < n; ++i) {
            sol.divq[i] += cd[c][i];
            sol.emission[i] += ce[c][i];
        }
    }
    return sol;
}

/// Relative mismatch between the integrated divergence and the wall flux
/// difference, scaled by the larger of the two magnitudes involved.
inline double energy_residual(const RteSolution& s) {
    double integral = 0.0, scale = 0.0;
    const double dx = s.x_face[1] - s.x_face[0];
    for (double d : s.divq) {
        integral += d * dx;
        scale += std::abs(d) * dx;
    }
    const double jump = s.q.back() - s.q.front();
    scale = std::max({scale, std::abs(s.q.back()) + std::abs(s.q.front()), 1e-300});
    return std::abs(integral - jump) / scale;
}

// --- Planck means ------------------------------------------------------------

/// Trapezoid Planck mean of a spectral field at temperature t.
inline double planck_mean_lbl(const SpectralField& field, double t) {
    require_temperature(t, "Planck temperature");
    field.validate();
    double num = 0.0, den = 0.0;
    const std::size_t n = field.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double c = (n > 1 && (i == 0 || i + 1 == n)) ? 0.5 : 1.0;
        const double ib = planck_intensity(t, field.eta[i]);
        num += c * field.kappa[i] * ib;
        den += c * ib;
    }
    return num / den;
}

/// Quadrature image of the integral of a k over g0.
inline double planck_mean_fsck(std::span<const double> weights, std::span<const double> ka) {
    if (weights.size() != ka.size())
        throw Error(ErrorKind::validation, "planck_mean_fsck: weights and ka differ in length");
    double s = 0.0;
    for (std::size_t j = 0; j < ka.size(); ++j) {
        if (!std::isfinite(ka[j]) || !std::isfinite(weights[j]))
            throw Error(ErrorKind::numeric, "planck_mean_fsck: non-finite input");
        s += weights[j] * ka[j];
    }
    return s;
}

// --- comparison report -------------------------------------------------------

struct Deviation {
    std::string model;
    double max_divq = 0.0, mean_divq = 0.0;
    double max_q = 0.0, mean_q = 0.0;
    double max_emission = 0.0, mean_emission = 0.0;
    double energy_residual = 0.0;
};

struct ComparisonReport {
    std::vector<RteSolution> solutions; // solutions[0] is the reference
    std::vector<Deviation> deviations;  // one per solution, reference included
};

namespace detail {

// |a - b| over the largest |b|, the scaling used for fields that change sign
inline std::pair<double, double> field_deviation(std::span<const double> a, std::span<const double> b) {
    double scale = 0.0;
    for (double v : b)
        scale = std::max(scale, std::abs(v));
    if (scale == 0.0)
        scale = 1.0;
    double mx = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::abs(a[i] - b[i]) / scale;
        mx = std::max(mx, d);
        sum += d;
    }
    return {mx, sum / static_cast<double>(a.size())};
}

} // namespace detail

inline ComparisonReport compare_solutions(std::vector<RteSolution> sols) {
    if (sols.empty())
        throw Error(ErrorKind::validation, "compare: no models");
    ComparisonReport r;
    const auto& ref = sols.front();
    for (const auto& s : sols) {
        if (s.divq.size() != ref.divq.size())
            throw Error(ErrorKind::validation, "compare: solutions on different meshes");
        Deviation d;
        d.model = s.name;
        std::tie(d.max_divq, d.mean_divq) = detail::field_deviation(s.divq, ref.divq);
        std::tie(d.max_q, d.mean_q) = detail::field_deviation(s.q, ref.q);
        std::tie(d.max_emission, d.mean_emission) = detail::field_deviation(s.emission, ref.emission);
        d.energy_residual = energy_residual(s);
        r.deviations.push_back(d);
    }
    r.solutions = std::move(sols);
    return r;
}

/// Solves every source with the exact solver; the first is the reference.
inline ComparisonReport compare_models(const SlabProblem& p, std::span<const SpectralSource> sources) {
    if (sources.empty())
        throw Error(ErrorKind::validation, "compare_models: no models");
    for (const auto& s : sources)
        if (s.weights != sources.front().weights)
            throw Error(ErrorKind::validation, "compare_models: models must share the quadrature");
    std::vector<RteSolution> sols;
    for (const auto& s : sources)
        sols.push_back(solve_slab_exact(p, s));
    return compare_solutions(std::move(sols));
}

inline void write_report_csv(const ComparisonReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorKind::io, "cannot open " + path + " for writing");
    out.precision(17);
    out << "x";
    for (const auto& s : r.solutions)
        out << ",emission_" << s.name << ",q_" << s.name << ",divq_" << s.name;
    out << '\n';
    const auto& ref = r.solutions.front();
    for (std::size_t i = 0; i < ref.x_center.size(); ++i) {
        out << ref.x_center[i];
        for (const auto& s : r.solutions)
            out << ',' << s.emission[i] << ',' << s.q_center(i) << ',' << s.divq[i];
        out << '\n';
    }
}

inline void write_report_summary(const ComparisonReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorKind::io, "cannot open " + path + " for writing");
    out.precision(6);
    out << "reference = " << r.solutions.front().name << '\n';
    for (const auto& d : r.deviations) {
        out << d.model << ".max_rel_divq = " << d.max_divq << '\n'
            << d.model << ".mean_rel_divq = " << d.mean_divq << '\n'
            << d.model << ".max_rel_q = " << d.max_q << '\n'
            << d.model << ".mean_rel_q = " << d.mean_q << '\n'
            << d.model << ".max_rel_emission = " << d.max_emission << '\n'
            << d.model << ".energy_residual = " << d.energy_residual << '\n';
    }
}

} // namespace fsck
