#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fsck/error.hpp"
#include "fsck/planck.hpp"
#include "fsck/quadrature.hpp"
#include "fsck/spectra.hpp"
#include "fsck/thermo_state.hpp"

namespace fsck {

/// Absorption coefficients of a field sorted ascending with duplicate values
/// merged. Shared by the distributions built at different Planck temperatures.
struct SortedSpectrum {
    std::vector<double> k;                  // distinct values, ascending
    std::vector<std::size_t> run_start;     // into order, size k.size() + 1
    std::vector<std::uint32_t> order;       // field indices sorted by kappa
    const SpectralField* field = nullptr;
};

inline SortedSpectrum sort_spectrum(const SpectralField& field) {
    SortedSpectrum s;
    s.field = &field;
    const std::size_t n = field.size();
    s.order.resize(n);
    std::iota(s.order.begin(), s.order.end(), 0u);
    std::sort(s.order.begin(), s.order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return field.kappa[a] < field.kappa[b];
    });
    s.k.reserve(n);
    s.run_start.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = field.kappa[s.order[i]];
        if (s.k.empty() || v != s.k.back()) {
            s.k.push_back(v);
            s.run_start.push_back(i);
        }
    }
    s.run_start.push_back(n);
    return s;
}

/// Planck-weighted k-distribution of one field.
///
/// The exact distribution is a set of point masses, one per distinct kappa.
/// `values`/`cumulative` keep that exact form (cumulative[i] is the mass of
/// all values <= values[i]). The smooth inverse k(g) interpolates in
/// (g, log k) through knots placed at the midpoint of each value's mass
/// interval, anchored by (0, min k) and (1, max k).
struct KDistribution {
    std::vector<double> g; // knots, strictly increasing from 0 to 1
    std::vector<double> k; // knot values, nondecreasing
    double planck_temperature = 0.0;
    ThermoState state;

    std::vector<double> values;
    std::vector<double> cumulative;

    double k_min() const { return values.front(); }
    double k_max() const { return values.back(); }

    /// Mass of all values <= kv.
    double cdf(double kv) const {
        auto it = std::upper_bound(values.begin(), values.end(), kv);
        if (it == values.begin())
            return 0.0;
        return cumulative[static_cast<std::size_t>(it - values.begin()) - 1];
    }

    /// Mass in the half-open interval (lo, hi].
    double mass_between(double lo, double hi) const { return cdf(hi) - cdf(lo); }
};

namespace detail {

// Neumaier summation. Cumulative g over ~1e5 wavenumbers would otherwise
// drift by about 1e-12, enough to move k(g) between close knots.
struct CompensatedSum {
    double sum = 0.0, carry = 0.0;

    void add(double v) {
        const double t = sum + v;
        carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

inline double planck_weight_sum(const SpectralField& field, double t, std::vector<double>& w) {
    w.resize(field.size());
    CompensatedSum total;
    for (std::size_t i = 0; i < field.size(); ++i) {
        w[i] = planck_intensity(t, field.eta[i]) * field.step;
        total.add(w[i]);
    }
    return total.value();
}

inline KDistribution distribution_from_sorted(const SortedSpectrum& sorted, double planck_t) {
    const SpectralField& field = *sorted.field;
    if (sorted.k.empty() || sorted.k.back() <= 0.0)
        throw Error(ErrorKind::degenerate,
                    "all-zero spectrum has no k-distribution: " + describe(field.state));
    std::vector<double> w;
    const double total = planck_weight_sum(field, planck_t, w);

    KDistribution d;
    d.planck_temperature = planck_t;
    d.state = field.state;
    const std::size_t m = sorted.k.size();
    d.values = sorted.k;
    d.cumulative.resize(m);
    d.g.reserve(m + 2);
    d.k.reserve(m + 2);
    d.g.push_back(0.0);
    d.k.push_back(sorted.k.front());
    CompensatedSum acc;
    for (std::size_t r = 0; r < m; ++r) {
        double mass = 0.0;
        for (std::size_t i = sorted.run_start[r]; i < sorted.run_start[r + 1]; ++i)
            mass += w[sorted.order[i]];
        const double mid = (acc.value() + 0.5 * mass) / total;
        acc.add(mass);
        d.cumulative[r] = acc.value() / total;
        if (mid > d.g.back() && mid < 1.0) {
            d.g.push_back(mid);
            d.k.push_back(sorted.k[r]);
        }
    }
    // absorb the rounding in the running sum into the last value
    d.cumulative.back() = 1.0;
    d.g.push_back(1.0);
    d.k.push_back(sorted.k.back());
    return d;
}

} // namespace detail

/// Reorders kappa_eta into a Planck-weighted cumulative k-distribution.
inline KDistribution build_kdist(const SpectralField& field, double planck_temperature) {
    require_temperature(planck_temperature, "Planck temperature");
    if (field.size() == 0)
        throw Error(ErrorKind::validation, "empty spectral field");
    return detail::distribution_from_sorted(sort_spectrum(field), planck_temperature);
}

/// k(g) by interpolation in (g, log k); exact at the knots and endpoints.
inline double invert_k(const KDistribution& dist, double g) {
    if (!(g >= 0.0 && g <= 1.0))
        throw Error(ErrorKind::domain, "invert_k: g outside [0,1]");
    if (g == 0.0)
        return dist.k_min();
    if (g == 1.0)
        return dist.k_max();
    const auto it = std::upper_bound(dist.g.begin(), dist.g.end(), g);
    const auto hi = static_cast<std::size_t>(it - dist.g.begin());
    const std::size_t lo = hi - 1;
    if (dist.g[lo] == g)
        return dist.k[lo];
    const double ka = dist.k[lo];
    const double kb = dist.k[hi];
    if (ka == kb)
        return ka;
    const double t = (g - dist.g[lo]) / (dist.g[hi] - dist.g[lo]);
    if (ka <= 0.0)
        return ka + t * (kb - ka);
    return ka * std::pow(kb / ka, t);
}

/// Nongray stretch profile at reference-space nodes g0.
struct StretchProfile {
    std::vector<double> g0;
    std::vector<double> a;
    std::vector<double> kstar; // cm^-1
    std::vector<double> ka;    // cm^-1
    double temperature = 0.0;
    double reference_temperature = 0.0;
    ThermoState state;
    ThermoState reference_state;

    std::size_t size() const { return g0.size(); }
};

/// Differential window for the stretch factor: a symmetric interval of
/// half-width `half_width` in reference-space g0, reflected at 0 and 1.
/// On a discrete spectrum a pointwise a is the Planck ratio of whichever few
/// wavenumbers sit at g0; the window has to average enough of them for the
/// result to survive halving the spectral step.
struct StretchWindow {
    double half_width = 3e-2;
};

namespace detail {

// T-weighted mass of the g0-prefix [0, x]. Runs straddling x contribute in
// proportion to the part of their T0 mass interval lying below x, so the
// map is continuous and piecewise linear in x.
inline double mass_below_g0(const KDistribution& dist_t, const KDistribution& dist_t0, double x) {
    const auto& c0 = dist_t0.cumulative;
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    const auto r = static_cast<std::size_t>(std::lower_bound(c0.begin(), c0.end(), x) - c0.begin());
    const double lo0 = r == 0 ? 0.0 : c0[r - 1];
    const double lo = r == 0 ? 0.0 : dist_t.cumulative[r - 1];
    const double span0 = c0[r] - lo0;
    if (span0 <= 0.0)
        return dist_t.cumulative[r];
    return lo + (x - lo0) / span0 * (dist_t.cumulative[r] - lo);
}

// mass_below_g0 continued past the ends with the density mirrored at 0 and 1.
inline double mirrored_mass(const KDistribution& dist_t, const KDistribution& dist_t0, double x) {
    if (x < 0.0)
        return -mass_below_g0(dist_t, dist_t0, -x);
    if (x > 1.0)
        return 2.0 - mass_below_g0(dist_t, dist_t0, 2.0 - x);
    return mass_below_g0(dist_t, dist_t0, x);
}

// Windows reflect off g0 = 0 and 1 rather than being cut: every bit of mass
// is then seen with total weight one, so the integral of a stays exact even
// where a is steep.
inline double stretch_at(const KDistribution& dist_t, const KDistribution& dist_t0, double g0,
                         const StretchWindow& window) {
    const double h = window.half_width;
    if (!(h > 0.0) || h > 0.5)
        throw Error(ErrorKind::domain, "a-value window half-width must lie in (0, 0.5]");
    return (mirrored_mass(dist_t, dist_t0, g0 + h) - mirrored_mass(dist_t, dist_t0, g0 - h)) / (2.0 * h);
}

} // namespace detail

/// Correlated k* and stretch factor a from the exact spectrum:
/// k*(g0) inverts the field's distribution Planck-weighted at t0, and a is
/// the ratio of the T and T0 weighted masses of the spectral points whose
/// reference-space positions lie within a narrow window around g0.
inline StretchProfile stretch_sorted(const SortedSpectrum& sorted, double t, double t0,
                                     std::span<const double> g0_nodes,
                                     const StretchWindow& window = {}) {
    require_temperature(t, "Planck temperature");
    require_temperature(t0, "reference temperature");
    const KDistribution dist_t0 = detail::distribution_from_sorted(sorted, t0);
    const KDistribution dist_t = t == t0 ? dist_t0 : detail::distribution_from_sorted(sorted, t);

    StretchProfile p;
    p.temperature = t;
    p.reference_temperature = t0;
    p.state = sorted.field->state;
    p.reference_state = sorted.field->state;
    p.g0.assign(g0_nodes.begin(), g0_nodes.end());
    p.a.resize(p.g0.size());
    p.kstar.resize(p.g0.size());
    p.ka.resize(p.g0.size());
    for (std::size_t j = 0; j < p.g0.size(); ++j) {
        const double ks = invert_k(dist_t0, p.g0[j]);
        p.kstar[j] = ks;
        p.a[j] = detail::stretch_at(dist_t, dist_t0, p.g0[j], window);
        p.ka[j] = ks * p.a[j];
    }
    return p;
}

inline StretchProfile stretch_exact(const SpectralField& field, double t, double t0,
                                    std::span<const double> g0_nodes,
                                    const StretchWindow& window = {}) {
    require_temperature(t, "Planck temperature");
    require_temperature(t0, "reference temperature");
    return stretch_sorted(sort_spectrum(field), t, t0, g0_nodes, window);
}

inline StretchProfile stretch_exact(const SpectralField& field, double t, double t0,
                                    const QuadratureSet& quad, const StretchWindow& window = {}) {
    return stretch_exact(field, t, t0, std::span<const double>(quad.nodes), window);
}

struct KgPoint {
    double g;
    double k;
};

inline std::vector<KgPoint> sample_kdist(const KDistribution& dist, std::span<const double> g) {
    std::vector<KgPoint> out;
    out.reserve(g.size());
    for (double gi : g)
        out.push_back({gi, invert_k(dist, gi)});
    return out;
}

namespace detail {

// g(k) from a tabulated (g, k) list: linear in log k between entries,
// clamped to the first/last g outside the tabulated k range.
inline double g_from_table(std::span<const KgPoint> table, double kv) {
    if (kv <= table.front().k)
        return table.front().g;
    if (kv >= table.back().k)
        return table.back().g;
    const auto it = std::upper_bound(table.begin(), table.end(), kv,
                                     [](double v, const KgPoint& p) { return v < p.k; });
    const auto& b = *it;
    const auto& a = *(it - 1);
    if (b.k == a.k)
        return b.g;
    const double t = (a.k > 0.0) ? std::log(kv / a.k) / std::log(b.k / a.k) : (kv - a.k) / (b.k - a.k);
    return a.g + t * (b.g - a.g);
}

} // namespace detail

/// Finite-difference stretch factors from tabulated distributions at T and
/// T0 sharing the same g nodes: the lower-order route where only a handful
/// of correlated k-values are available.
inline StretchProfile stretch_discrete(std::span<const KgPoint> kg_t, std::span<const KgPoint> kg_t0,
                                       std::size_t n_points) {
    if (n_points < 3 || kg_t.size() < 3 || kg_t0.size() < 3)
        throw Error(ErrorKind::degenerate, "stretch_discrete needs at least 3 nodes");
    if (kg_t.size() != n_points || kg_t0.size() != n_points)
        throw Error(ErrorKind::validation, "stretch_discrete: list lengths differ from n_points");
    for (std::size_t j = 0; j < n_points; ++j) {
        if (kg_t[j].g != kg_t0[j].g)
            throw Error(ErrorKind::validation, "stretch_discrete: g nodes differ between lists");
        if (j > 0 && (!(kg_t[j].g > kg_t[j - 1].g) || kg_t[j].k < kg_t[j - 1].k ||
                      kg_t0[j].k < kg_t0[j - 1].k))
            throw Error(ErrorKind::validation, "stretch_discrete: lists must be sorted");
    }

    StretchProfile p;
    p.g0.resize(n_points);
    p.kstar.resize(n_points);
    p.a.resize(n_points);
    p.ka.resize(n_points);
    std::vector<double> gt(n_points);
    for (std::size_t j = 0; j < n_points; ++j) {
        p.g0[j] = kg_t0[j].g;
        p.kstar[j] = kg_t0[j].k;
        gt[j] = detail::g_from_table(kg_t, kg_t0[j].k);
    }
    // Flat stretches of k make g(k) ambiguous; pair equal-k runs of the two
    // tables by relative g position instead.
    for (std::size_t r0 = 0; r0 < n_points;) {
        std::size_t r1 = r0;
        while (r1 + 1 < n_points && kg_t0[r1 + 1].k == kg_t0[r0].k)
            ++r1;
        const double kv = kg_t0[r0].k;
        std::size_t s0 = n_points, s1 = 0;
        for (std::size_t i = 0; i < n_points; ++i)
            if (kg_t[i].k == kv) {
                s0 = std::min(s0, i);
                s1 = i;
            }
        if (r1 > r0 && s0 < s1) {
            for (std::size_t j = r0; j <= r1; ++j) {
                const double u = (kg_t0[j].g - kg_t0[r0].g) / (kg_t0[r1].g - kg_t0[r0].g);
                gt[j] = kg_t[s0].g + u * (kg_t[s1].g - kg_t[s0].g);
            }
        }
        r0 = r1 + 1;
    }
    for (std::size_t j = 0; j < n_points; ++j) {
        const std::size_t lo = j == 0 ? 0 : j - 1;
        const std::size_t hi = j + 1 == n_points ? j : j + 1;
        p.a[j] = (gt[hi] - gt[lo]) / (p.g0[hi] - p.g0[lo]);
        p.ka[j] = p.kstar[j] * p.a[j];
    }
    return p;
}

/// One labeled quadrature node.
struct NodeValue {
    double g;
    double kstar;
    double ka;
};

inline std::vector<NodeValue> node_values(const StretchProfile& p) {
    std::vector<NodeValue> out(p.size());
    for (std::size_t j = 0; j < p.size(); ++j)
        out[j] = {p.g0[j], p.kstar[j], p.ka[j]};
    return out;
}

/// Labeling oracle: synthesize the state's spectrum and evaluate the exact
/// stretch profile at the quadrature nodes, with T = state temperature.
inline std::vector<NodeValue> kdist_at_state(const ThermoState& state, double t0,
                                             const QuadratureSet& quad, SpectrumCache& cache) {
    require_temperature(t0, "reference temperature");
    const SpectralField field = cache.spectrum(state);
    return node_values(stretch_exact(field, state.temperature, t0, quad));
}

inline std::vector<NodeValue> kdist_at_state(const ThermoState& state, double t0,
                                             const QuadratureSet& quad, const LineCatalog& catalog,
                                             const SpectralGrid& grid = {}) {
    require_temperature(t0, "reference temperature");
    const SpectralField field = synth_spectrum(state, catalog, grid);
    return node_values(stretch_exact(field, state.temperature, t0, quad));
}

inline void write_kdist_csv(const KDistribution& dist, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorKind::io, "cannot open " + path + " for writing");
    out.precision(17);
    out << "g,k\n";
    for (std::size_t i = 0; i < dist.g.size(); ++i)
        out << dist.g[i] << ',' << dist.k[i] << '\n';
}

inline void write_stretch_csv(const StretchProfile& p, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorKind::io, "cannot open " + path + " for writing");
    out.precision(17);
    out << "g0,kstar,a,ka\n";
    for (std::size_t j = 0; j < p.size(); ++j)
        out << p.g0[j] << ',' << p.kstar[j] << ',' << p.a[j] << ',' << p.ka[j] << '\n';
}

} // namespace fsck
