#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fsck/binio.hpp"
#include "fsck/error.hpp"
#include "fsck/kdist.hpp"
#include "fsck/parallel.hpp"
#include "fsck/quadrature.hpp"
#include "fsck/spectra.hpp"

namespace fsck {

/// Axis order of the table: T, T0, x_co2, x_h2o, x_co.
inline constexpr std::size_t table_dims = 5;

struct TableAxes {
    std::array<std::vector<double>, table_dims> axis;

    std::size_t points() const {
        std::size_t n = 1;
        for (const auto& a : axis)
            n *= a.size();
        return n;
    }

    void validate() const {
        for (std::size_t d = 0; d < table_dims; ++d) {
            const auto& a = axis[d];
            if (a.size() < 2)
                throw Error(ErrorKind::validation, "table axis " + std::to_string(d) + " needs >= 2 values");
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (!std::isfinite(a[i]))
                    throw Error(ErrorKind::validation, "non-finite table axis value");
                if (i > 0 && !(a[i] > a[i - 1]))
                    throw Error(ErrorKind::validation, "table axis " + std::to_string(d) + " not strictly increasing");
            }
        }
    }

    /// Axes must lie inside the envelope box, per coordinate.
    void require_in_envelope() const {
        for (int d = 0; d < 2; ++d)
            for (double t : axis[d])
                require_temperature(t, d == 0 ? "table T axis" : "table T0 axis");
        for (int d = 2; d < 5; ++d) {
            const double cap = d == 4 ? envelope::x_co_max : envelope::x_max;
            for (double x : axis[d])
                if (!(x >= 0.0 && x <= cap))
                    throw Error(ErrorKind::range, "table mole-fraction axis outside envelope");
        }
    }

    /// 300..3000 K every 300 K and Table-1 mole-fraction grids thinned to 6 values.
    static TableAxes desk_default() {
        TableAxes a;
        for (double t = 300.0; t <= 3000.0; t += 300.0) {
            a.axis[0].push_back(t);
            a.axis[1].push_back(t);
        }
        a.axis[2] = {0.0, 0.02, 0.05, 0.15, 0.5, 1.0};
        a.axis[3] = {0.0, 0.02, 0.05, 0.15, 0.5, 1.0};
        a.axis[4] = {0.0, 0.02, 0.05, 0.1, 0.25, 0.5};
        return a;
    }
};

/// Dense k* and ka values at every grid point and quadrature node.
/// Storage is channel-major: values[c][point][node], c = 0 for k*, 1 for ka,
/// with the point index row-major over the axes (T slowest).
struct FsckTable {
    TableAxes axes;
    QuadratureSet quad;
    std::vector<double> values;

    std::size_t points() const { return axes.points(); }
    std::size_t nodes() const { return quad.size(); }

    std::size_t point_index(const std::array<std::size_t, table_dims>& idx) const {
        std::size_t p = 0;
        for (std::size_t d = 0; d < table_dims; ++d)
            p = p * axes.axis[d].size() + idx[d];
        return p;
    }

    double& at(int channel, std::size_t point, std::size_t node) {
        return values[(static_cast<std::size_t>(channel) * points() + point) * nodes() + node];
    }
    double at(int channel, std::size_t point, std::size_t node) const {
        return values[(static_cast<std::size_t>(channel) * points() + point) * nodes() + node];
    }
};

namespace detail {

inline std::array<std::size_t, table_dims> unravel(const TableAxes& axes, std::size_t p) {
    std::array<std::size_t, table_dims> idx{};
    for (std::size_t d = table_dims; d-- > 0;) {
        idx[d] = p % axes.axis[d].size();
        p /= axes.axis[d].size();
    }
    return idx;
}

} // namespace detail

/// Exhaustive evaluation of the labeling oracle at every grid point. Corners
/// whose mole fractions sum above one are evaluated on the unclipped linear
/// spectrum so that interpolation inside the envelope stays well defined;
/// the all-zero composition stores zeros, the limit of k* and ka as x -> 0.
inline FsckTable build_table(const TableAxes& axes, const QuadratureSet& quad, SpectrumCache& cache,
                             unsigned threads = 0) {
    axes.validate();
    axes.require_in_envelope();
    FsckTable table;
    table.axes = axes;
    table.quad = quad;
    table.values.assign(2 * axes.points() * quad.size(), 0.0);

    // one sort per (T, composition); T0 only changes the Planck weighting
    const std::size_t n_t0 = axes.axis[1].size();
    const std::size_t groups = axes.points() / n_t0;
    const std::size_t n_x = axes.axis[2].size() * axes.axis[3].size() * axes.axis[4].size();
    parallel_for(
        groups,
        [&](std::size_t gi) {
            const std::size_t it = gi / n_x;
            std::size_t rest = gi % n_x;
            const std::size_t ico = rest % axes.axis[4].size();
            rest /= axes.axis[4].size();
            const std::size_t ih2o = rest % axes.axis[3].size();
            const std::size_t ico2 = rest / axes.axis[3].size();
            ThermoState s;
            s.temperature = axes.axis[0][it];
            s.x_co2 = axes.axis[2][ico2];
            s.x_h2o = axes.axis[3][ih2o];
            s.x_co = axes.axis[4][ico];
            if (s.total_absorber() == 0.0)
                return;
            const SpectralField field = cache.spectrum_unchecked(s);
            const SortedSpectrum sorted = sort_spectrum(field);
            for (std::size_t i0 = 0; i0 < n_t0; ++i0) {
                const auto prof = stretch_sorted(sorted, s.temperature, axes.axis[1][i0], quad.nodes);
                const std::size_t p = table.point_index({it, i0, ico2, ih2o, ico});
                for (std::size_t j = 0; j < quad.size(); ++j) {
                    table.at(0, p, j) = prof.kstar[j];
                    table.at(1, p, j) = prof.ka[j];
                }
            }
        },
        threads);
    return table;
}

/// 5-D multilinear interpolation, independently per node and channel.
/// Queries outside the axis box are rejected rather than clamped.
inline std::vector<NodeValue> interp(const FsckTable& table, const ThermoState& state, double t0) {
    const double q[table_dims] = {state.temperature, t0, state.x_co2, state.x_h2o, state.x_co};
    std::array<std::size_t, table_dims> lo{};
    std::array<double, table_dims> frac{};
    for (std::size_t d = 0; d < table_dims; ++d) {
        const auto& a = table.axes.axis[d];
        if (!(q[d] >= a.front() && q[d] <= a.back()))
            throw Error(ErrorKind::range, "table query outside the axis box (axis " + std::to_string(d) + ")");
        auto it = std::upper_bound(a.begin(), a.end(), q[d]);
        std::size_t i = static_cast<std::size_t>(it - a.begin());
        i = std::clamp<std::size_t>(i, 1, a.size() - 1) - 1;
        lo[d] = i;
        frac[d] = (q[d] - a[i]) / (a[i + 1] - a[i]);
    }

    const std::size_t n = table.nodes();
    std::vector<NodeValue> out(n);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = {table.quad.nodes[j], 0.0, 0.0};
    for (unsigned corner = 0; corner < (1u << table_dims); ++corner) {
        double w = 1.0;
        std::array<std::size_t, table_dims> idx{};
        for (std::size_t d = 0; d < table_dims; ++d) {
            const bool up = (corner >> d) & 1u;
            w *= up ? frac[d] : 1.0 - frac[d];
            idx[d] = lo[d] + (up ? 1 : 0);
        }
        if (w == 0.0)
            continue;
        const std::size_t p = table.point_index(idx);
        const double* k = &table.values[p * n];
        const double* ka = &table.values[(table.points() + p) * n];
        for (std::size_t j = 0; j < n; ++j) {
            out[j].kstar += w * k[j];
            out[j].ka += w * ka[j];
        }
    }
    return out;
}

inline constexpr std::uint32_t table_version = 1;

/// Layout: "FSKT", u32 version, 5 x u32 axis lengths, axis values, u32 node
/// count, node g values and weights, then the channel-major value array.
inline void save_table(const FsckTable& table, const std::string& path) {
    binio::Writer w;
    w.bytes("FSKT", 4);
    w.u32(table_version);
    for (const auto& a : table.axes.axis)
        w.u32(static_cast<std::uint32_t>(a.size()));
    for (const auto& a : table.axes.axis)
        for (double v : a)
            w.f64(v);
    w.u32(static_cast<std::uint32_t>(table.nodes()));
    for (double g : table.quad.nodes)
        w.f64(g);
    for (double wt : table.quad.weights)
        w.f64(wt);
    for (double v : table.values)
        w.f64(v);
    w.save(path);
}

inline FsckTable load_table(const std::string& path) {
    auto r = binio::Reader::open(path);
    char magic[4];
    r.bytes(magic, 4);
    if (std::string(magic, 4) != "FSKT")
        throw FormatError(FileFault::bad_magic, path + ": bad magic, not a table file");
    if (r.u32() != table_version)
        throw FormatError(FileFault::bad_version, path + ": unsupported table version");
    FsckTable t;
    std::array<std::uint32_t, table_dims> len{};
    for (auto& l : len)
        l = r.u32();
    for (std::size_t d = 0; d < table_dims; ++d) {
        if (len[d] > r.remaining() / 8)
            throw FormatError(FileFault::truncated, path + ": truncated file");
        t.axes.axis[d].resize(len[d]);
        for (auto& v : t.axes.axis[d])
            v = r.f64();
    }
    const std::uint32_t n = r.u32();
    if (n > r.remaining() / 16)
        throw FormatError(FileFault::truncated, path + ": truncated file");
    t.quad.nodes.resize(n);
    t.quad.weights.resize(n);
    for (auto& g : t.quad.nodes)
        g = r.f64();
    for (auto& wt : t.quad.weights)
        wt = r.f64();
    try {
        t.axes.validate();
    } catch (const Error& e) {
        throw FormatError(FileFault::shape, path + ": " + e.what());
    }
    const std::size_t count = 2 * t.axes.points() * n;
    if (r.remaining() != count * 8)
        throw FormatError(FileFault::shape, path + ": value array length does not match the axes");
    t.values.resize(count);
    for (auto& v : t.values)
        v = r.f64();
    return t;
}

} // namespace fsck
