#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "fsck/fsck.hpp"

namespace fsck::testing {

// Default catalog on a 1 cm^-1 grid: the lines are still resolved and each
// temperature costs a tenth of the default grid.
inline SpectralGrid coarse_grid() { return {150.0, 9300.0, 1.0}; }

inline LineCatalog small_catalog(std::uint64_t seed = 1) { return make_catalog(seed, coarse_grid()); }

inline SpectrumCache& shared_cache() {
    static SpectrumCache cache(small_catalog(), coarse_grid());
    return cache;
}

// Random in-envelope state on a continuous box.
inline ThermoState random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> t(300.0, 3000.0), u(0.0, 1.0);
    for (;;) {
        ThermoState s;
        s.temperature = std::round(t(rng) / 100.0) * 100.0; // keep the spectrum cache small
        s.x_co2 = 0.3 * u(rng);
        s.x_h2o = 0.4 * u(rng);
        s.x_co = 0.1 * u(rng);
        if (s.total_absorber() > 0.01)
            return s;
    }
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("fsck_" + tag + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream(path) << text;
}

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    throw std::runtime_error("expected an fsck::Error");
}

} // namespace fsck::testing
