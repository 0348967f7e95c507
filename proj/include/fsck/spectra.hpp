#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "fsck/error.hpp"
#include "fsck/planck.hpp"
#include "fsck/thermo_state.hpp"

namespace fsck {

/// Uniform wavenumber grid [eta_min, eta_max] with spacing step (cm^-1).
struct SpectralGrid {
    double eta_min = 150.0;
    double eta_max = 9300.0;
    double step = 0.1;

    std::size_t size() const {
        return static_cast<std::size_t>(std::llround((eta_max - eta_min) / step)) + 1;
    }
    double eta(std::size_t i) const { return eta_min + static_cast<double>(i) * step; }

    void validate() const {
        if (!(eta_min > 0.0) || !(step > 0.0) || !(eta_max > eta_min) || !std::isfinite(eta_max))
            throw Error(ErrorKind::domain, "spectral grid needs 0 < eta_min < eta_max and step > 0");
    }

    /// Parses "min:max:step".
    static SpectralGrid parse(const std::string& text) {
        SpectralGrid g;
        char c1 = 0, c2 = 0;
        std::istringstream is(text);
        if (!(is >> g.eta_min >> c1 >> g.eta_max >> c2 >> g.step) || c1 != ':' || c2 != ':')
            throw Error(ErrorKind::config, "grid spec must read min:max:step, got '" + text + "'");
        if (!(g.eta_min > 0.0 && g.eta_max > g.eta_min && g.step > 0.0))
            throw Error(ErrorKind::config, "grid spec needs 0 < min < max and step > 0, got '" + text + "'");
        return g;
    }

    std::string to_string() const {
        std::ostringstream os;
        os.precision(17);
        os << eta_min << ':' << eta_max << ':' << step;
        return os.str();
    }
};

/// Absorption coefficient kappa_eta (cm^-1) on a uniform wavenumber grid.
struct SpectralField {
    std::vector<double> eta;   // cm^-1, uniform
    std::vector<double> kappa; // cm^-1, >= 0
    double step = 0.0;
    ThermoState state;

    std::size_t size() const { return kappa.size(); }

    void validate() const {
        if (eta.size() != kappa.size())
            throw Error(ErrorKind::validation, "eta/kappa length mismatch");
        if (eta.empty())
            throw Error(ErrorKind::validation, "empty spectral field");
        if (eta.size() > 1 && !(step > 0.0))
            throw Error(ErrorKind::validation, "non-positive grid spacing");
        for (std::size_t i = 0; i < kappa.size(); ++i) {
            if (!(kappa[i] >= 0.0) || !std::isfinite(kappa[i]))
                throw Error(ErrorKind::validation, "kappa negative or non-finite at index " +
                                                       std::to_string(i));
            if (i > 0 && !(eta[i] > eta[i - 1]))
                throw Error(ErrorKind::validation, "eta not strictly increasing at index " +
                                                       std::to_string(i));
        }
    }
};

inline SpectralField gray_field(const SpectralGrid& grid, double kappa0, ThermoState state = {}) {
    grid.validate();
    SpectralField f;
    f.step = grid.step;
    f.state = state;
    f.eta.resize(grid.size());
    for (std::size_t i = 0; i < f.eta.size(); ++i)
        f.eta[i] = grid.eta(i);
    f.kappa.assign(f.eta.size(), kappa0);
    return f;
}

struct SpectralLine {
    double center;     // cm^-1
    double strength;   // S0 at 300 K, cm^-2 atm^-1
    double lower_energy; // E'', cm^-1
    double half_width; // gamma0 at 300 K, cm^-1
};

/// Deterministic synthetic line list, one block per absorbing species.
struct LineCatalog {
    std::uint64_t seed = 0;
    std::array<std::vector<SpectralLine>, species_count> lines;

    const std::vector<SpectralLine>& of(Species s) const {
        return lines[static_cast<std::size_t>(s)];
    }
};

namespace detail {

struct Band {
    double center;
    double spread;   // standard deviation of line positions
    double share;    // fraction of the species' lines
    double strength; // log10 of the median line strength
};

inline const std::vector<Band>& bands_of(Species s) {
    // Loosely patterned on the real fundamental and combination bands.
    static const std::vector<Band> co2 = {
        {667.0, 35.0, 0.25, 0.3},  {961.0, 20.0, 0.05, -2.5}, {1064.0, 20.0, 0.05, -2.5},
        {2349.0, 30.0, 0.30, 1.0}, {3715.0, 40.0, 0.20, -0.7}, {4980.0, 40.0, 0.08, -2.2},
        {6970.0, 50.0, 0.07, -3.0},
    };
    static const std::vector<Band> h2o = {
        {400.0, 160.0, 0.25, 0.0},  {1595.0, 110.0, 0.25, 0.0}, {3755.0, 120.0, 0.25, -0.3},
        {5330.0, 100.0, 0.13, -1.5}, {7250.0, 110.0, 0.12, -2.0},
    };
    static const std::vector<Band> co = {
        {2143.0, 45.0, 0.75, 0.5},
        {4260.0, 40.0, 0.25, -1.5},
    };
    switch (s) {
    case Species::co2: return co2;
    case Species::h2o: return h2o;
    case Species::co: return co;
    }
    return co;
}

} // namespace detail

/// Second radiation constant used in the line Boltzmann factor (cm K).
inline constexpr double line_c2 = 1.4388;

inline constexpr std::size_t default_lines_per_species = 3000;

/// Shape of the synthetic line population. The defaults give broad,
/// overlapping bands of wide lines: k still spans six to seven decades, but
/// k(g) stays smooth enough for an 8-node quadrature to preserve emission.
struct CatalogShape {
    std::size_t lines_per_species = default_lines_per_species;
    double strength_scale = 0.0;  // log10 offset applied to every band
    double strength_spread = 0.2; // half-width of the log10 strength spread
    double width_min = 3.0;       // gamma0 range, cm^-1
    double width_max = 8.0;
    double spread_scale = 14.0;   // multiplies band position spreads
    double band_contrast = 0.3;   // multiplies the per-band log10 strength offsets
    double energy_max = 3000.0;   // lower-state energies drawn from [0, energy_max], cm^-1
    bool thermal_population = true; // scale S0 by exp(-c2 E''/300 K)
};

/// Generates lines per species, all centred inside grid.
inline LineCatalog make_catalog(std::uint64_t seed, const SpectralGrid& grid = {},
                                const CatalogShape& shape = {}) {
    const std::size_t lines_per_species = shape.lines_per_species;
    grid.validate();
    LineCatalog cat;
    cat.seed = seed;
    for (int si = 0; si < species_count; ++si) {
        const auto species = static_cast<Species>(si);
        std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(si) + 1);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::normal_distribution<double> normal(0.0, 1.0);
        const auto& bands = detail::bands_of(species);

        std::vector<double> cumulative;
        double acc = 0.0;
        for (const auto& b : bands)
            cumulative.push_back(acc += b.share);

        auto& out = cat.lines[static_cast<std::size_t>(si)];
        out.reserve(lines_per_species);
        while (out.size() < lines_per_species) {
            const double pick = unit(rng) * acc;
            const auto bi = static_cast<std::size_t>(
                std::lower_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin());
            const auto& band = bands[std::min(bi, bands.size() - 1)];
            const double center = band.center + shape.spread_scale * band.spread * normal(rng);
            const double strength =
                std::pow(10.0, shape.strength_scale + shape.band_contrast * band.strength +
                                   shape.strength_spread * (2.0 * unit(rng) - 1.0));
            const double energy = shape.energy_max * unit(rng);
            const double width = shape.width_min + (shape.width_max - shape.width_min) * unit(rng);
            if (center <= grid.eta_min || center >= grid.eta_max)
                continue;
            const double population = shape.thermal_population ? std::exp(-line_c2 * energy / 300.0) : 1.0;
            out.push_back({center, strength * population, energy, width});
        }
    }
    return cat;
}

/// Line strength and Lorentz half-width at temperature t.
inline SpectralLine line_at_temperature(const SpectralLine& ref, double t) {
    SpectralLine out = ref;
    const double ratio = 300.0 / t;
    out.strength = ref.strength * ratio * std::sqrt(ratio) *
                   std::exp(-line_c2 * ref.lower_energy * (1.0 / t - 1.0 / 300.0));
    out.half_width = ref.half_width * std::sqrt(ratio);
    return out;
}

/// Pure-species absorption coefficients (x = 1, p = 1 atm) at one temperature.
struct SpeciesSpectra {
    SpectralGrid grid;
    double temperature = 0.0;
    std::vector<double> eta;
    std::array<std::vector<double>, species_count> kappa;
};

inline SpeciesSpectra species_spectra(double temperature, const LineCatalog& catalog,
                                      const SpectralGrid& grid) {
    grid.validate();
    if (!(temperature > 0.0))
        throw Error(ErrorKind::domain, "species_spectra requires T > 0");
    SpeciesSpectra out;
    out.grid = grid;
    out.temperature = temperature;
    const std::size_t n = grid.size();
    out.eta.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.eta[i] = grid.eta(i);
    for (int si = 0; si < species_count; ++si) {
        auto& k = out.kappa[static_cast<std::size_t>(si)];
        k.assign(n, 0.0);
        for (const auto& ref : catalog.lines[static_cast<std::size_t>(si)]) {
            const SpectralLine line = line_at_temperature(ref, temperature);
            const double amp = line.strength * line.half_width / phys::pi;
            const double g2 = line.half_width * line.half_width;
            const double c = line.center;
            const double* e = out.eta.data();
            double* kp = k.data();
            for (std::size_t i = 0; i < n; ++i) {
                const double d = e[i] - c;
                kp[i] += amp / (d * d + g2);
            }
        }
    }
    return out;
}

/// Mixture spectrum p * sum_s x_s kappa_s from precomputed pure-species spectra.
inline SpectralField combine(const SpeciesSpectra& pure, const ThermoState& state) {
    SpectralField f;
    f.eta = pure.eta;
    f.step = pure.grid.step;
    f.state = state;
    const std::size_t n = pure.eta.size();
    f.kappa.resize(n);
    const double p = state.pressure;
    const double x0 = state.x_co2, x1 = state.x_h2o, x2 = state.x_co;
    const double* k0 = pure.kappa[0].data();
    const double* k1 = pure.kappa[1].data();
    const double* k2 = pure.kappa[2].data();
    for (std::size_t i = 0; i < n; ++i)
        f.kappa[i] = p * (x0 * k0[i] + x1 * k1[i] + x2 * k2[i]);
    return f;
}

/// Lorentz line superposition for the given state. Pure and deterministic.
inline SpectralField synth_spectrum(const ThermoState& state, const LineCatalog& catalog,
                                    const SpectralGrid& grid = {}) {
    require_in_envelope(state);
    return combine(species_spectra(state.temperature, catalog, grid), state);
}

/// Memoizes pure-species spectra per temperature. Labeling many states drawn
/// from a discrete temperature set reuses the expensive line sums.
class SpectrumCache {
public:
    SpectrumCache(LineCatalog catalog, SpectralGrid grid)
        : catalog_(std::move(catalog)), grid_(grid) {
        grid_.validate();
    }

    const LineCatalog& catalog() const { return catalog_; }
    const SpectralGrid& grid() const { return grid_; }

    std::shared_ptr<const SpeciesSpectra> pure(double temperature) {
        std::shared_ptr<Slot> slot;
        {
            std::lock_guard lock(mutex_);
            auto& s = slots_[temperature];
            if (!s)
                s = std::make_shared<Slot>();
            slot = s;
        }
        std::call_once(slot->once, [&] {
            slot->value = std::make_shared<const SpeciesSpectra>(
                species_spectra(temperature, catalog_, grid_));
        });
        return slot->value;
    }

    SpectralField spectrum(const ThermoState& state) {
        require_in_envelope(state);
        return combine(*pure(state.temperature), state);
    }

    /// As spectrum() but without the mole-fraction envelope check; lookup
    /// tables need values at grid corners whose fractions sum above one.
    SpectralField spectrum_unchecked(const ThermoState& state) {
        require_temperature(state.temperature);
        return combine(*pure(state.temperature), state);
    }

private:
    struct Slot {
        std::once_flag once;
        std::shared_ptr<const SpeciesSpectra> value;
    };

    LineCatalog catalog_;
    SpectralGrid grid_;
    std::mutex mutex_;
    std::map<double, std::shared_ptr<Slot>> slots_;
};

inline void save_spectrum_csv(const SpectralField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorKind::io, "cannot open " + path + " for writing");
    out.precision(17);
    out << "eta_cm-1,kappa_cm-1\n";
    for (std::size_t i = 0; i < field.size(); ++i)
        out << field.eta[i] << ',' << field.kappa[i] << '\n';
    if (!out)
        throw Error(ErrorKind::io, "write failed for " + path);
}

namespace detail {

inline bool parse_double(const std::string& text, double& value) {
    std::size_t used = 0;
    try {
        value = std::stod(text, &used);
    } catch (...) {
        return false;
    }
    while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used])))
        ++used;
    return used == text.size();
}

inline std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ','))
        cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

} // namespace detail

/// Reads a two-column spectrum. Non-uniform grids are resampled onto a
/// uniform grid with the smallest input spacing by linear interpolation.
inline SpectralField load_spectrum_csv(const std::string& path, ThermoState state = {}) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::io, "cannot open " + path);
    std::string line;
    std::size_t lineno = 0;
    std::vector<double> eta, kappa;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (detail::trim(line).empty())
            continue;
        const auto cells = detail::split_csv(line);
        if (!header_seen) {
            header_seen = true;
            if (cells.size() == 2 && cells[0] == "eta_cm-1" && cells[1] == "kappa_cm-1")
                continue;
            throw Error(ErrorKind::parse,
                        path + ":" + std::to_string(lineno) + ": expected header eta_cm-1,kappa_cm-1");
        }
        const std::string where = path + ":" + std::to_string(lineno) + ": ";
        double e = 0.0, k = 0.0;
        if (cells.size() != 2 || !detail::parse_double(cells[0], e) ||
            !detail::parse_double(cells[1], k))
            throw Error(ErrorKind::parse, where + "expected two numeric columns");
        if (!std::isfinite(e) || !std::isfinite(k))
            throw Error(ErrorKind::validation, where + "non-finite value");
        if (!(e > 0.0))
            throw Error(ErrorKind::validation, where + "wavenumber must be positive");
        if (k < 0.0)
            throw Error(ErrorKind::validation, where + "negative absorption coefficient");
        if (!eta.empty() && !(e > eta.back()))
            throw Error(ErrorKind::validation, where + "wavenumber not strictly increasing");
        eta.push_back(e);
        kappa.push_back(k);
    }
    if (eta.empty())
        throw Error(ErrorKind::validation, path + ": no spectral data");

    SpectralField f;
    f.state = state;
    if (eta.size() == 1) {
        f.eta = eta;
        f.kappa = kappa;
        f.step = 1.0;
        return f;
    }
    const double nominal = (eta.back() - eta.front()) / static_cast<double>(eta.size() - 1);
    double min_step = nominal;
    bool uniform = true;
    for (std::size_t i = 1; i < eta.size(); ++i) {
        const double d = eta[i] - eta[i - 1];
        min_step = std::min(min_step, d);
        if (std::abs(d - nominal) > 1e-6 * nominal)
            uniform = false;
    }
    if (uniform) {
        f.eta = std::move(eta);
        f.kappa = std::move(kappa);
        f.step = nominal;
        return f;
    }
    const auto n = static_cast<std::size_t>(std::floor((eta.back() - eta.front()) / min_step + 1e-9)) + 1;
    f.step = min_step;
    f.eta.resize(n);
    f.kappa.resize(n);
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = std::min(eta.front() + static_cast<double>(i) * min_step, eta.back());
        while (j + 2 < eta.size() && eta[j + 1] < e)
            ++j;
        const double t = (e - eta[j]) / (eta[j + 1] - eta[j]);
        f.eta[i] = e;
        f.kappa[i] = kappa[j] + std::clamp(t, 0.0, 1.0) * (kappa[j + 1] - kappa[j]);
    }
    return f;
}

} // namespace fsck
