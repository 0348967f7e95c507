#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "fsck/error.hpp"

namespace fsck {

/// Bounds of the thermodynamic envelope the surrogate is trained on.
namespace envelope {
inline constexpr double t_min = 300.0;
inline constexpr double t_max = 3000.0;
inline constexpr double x_max = 1.0;
inline constexpr double x_co_max = 0.5;
inline constexpr double pressure_atm = 1.0;
} // namespace envelope

enum class Species { co2 = 0, h2o = 1, co = 2 };
inline constexpr int species_count = 3;

inline const char* species_name(Species s) {
    switch (s) {
    case Species::co2: return "CO2";
    case Species::h2o: return "H2O";
    case Species::co: return "CO";
    }
    return "?";
}

/// Local state: temperature and mole fractions at fixed total pressure.
/// The balance of the mixture is transparent N2.
struct ThermoState {
    double temperature = 1000.0; // K
    double x_co2 = 0.0;
    double x_h2o = 0.0;
    double x_co = 0.0;
    double pressure = envelope::pressure_atm; // atm

    double mole_fraction(Species s) const {
        switch (s) {
        case Species::co2: return x_co2;
        case Species::h2o: return x_h2o;
        case Species::co: return x_co;
        }
        return 0.0;
    }

    double total_absorber() const { return x_co2 + x_h2o + x_co; }

    friend bool operator==(const ThermoState&, const ThermoState&) = default;
};

inline std::string describe(const ThermoState& s) {
    std::ostringstream os;
    os.precision(17);
    os << "T=" << s.temperature << " K, x_co2=" << s.x_co2 << ", x_h2o=" << s.x_h2o
       << ", x_co=" << s.x_co << ", p=" << s.pressure << " atm";
    return os.str();
}

inline bool temperature_in_envelope(double t) {
    return std::isfinite(t) && t >= envelope::t_min && t <= envelope::t_max;
}

inline void require_temperature(double t, const char* what = "temperature") {
    if (!temperature_in_envelope(t)) {
        std::ostringstream os;
        os << what << " " << t << " K outside [" << envelope::t_min << ", " << envelope::t_max
           << "] K";
        throw Error(ErrorKind::range, os.str());
    }
}

/// Composition checks only; used where temperature is handled separately.
inline void require_composition(const ThermoState& s) {
    const double xs[] = {s.x_co2, s.x_h2o, s.x_co};
    for (double x : xs) {
        if (!std::isfinite(x) || x < 0.0)
            throw Error(ErrorKind::range, "negative or non-finite mole fraction: " + describe(s));
    }
    if (s.total_absorber() > envelope::x_max + 1e-12)
        throw Error(ErrorKind::range, "mole fractions sum above 1: " + describe(s));
    if (s.x_co > envelope::x_co_max + 1e-12)
        throw Error(ErrorKind::range, "x_co above 0.5: " + describe(s));
    if (std::abs(s.pressure - envelope::pressure_atm) > 1e-12)
        throw Error(ErrorKind::range, "pressure is fixed at 1 atm: " + describe(s));
}

inline void require_in_envelope(const ThermoState& s) {
    require_temperature(s.temperature);
    require_composition(s);
}

} // namespace fsck
