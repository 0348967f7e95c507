#pragma once

#include <cmath>
#include <numbers>

#include "fsck/error.hpp"

namespace fsck {

namespace phys {
inline constexpr double h = 6.62607015e-34;   // J s
inline constexpr double c = 299792458.0;      // m/s
inline constexpr double k_b = 1.380649e-23;   // J/K
inline constexpr double pi = std::numbers::pi;
/// hc/k in cm K.
inline constexpr double c2 = h * c / k_b * 100.0;
/// 2hc^2 scaled so that eta in cm^-1 yields W m^-2 sr^-1 (cm^-1)^-1.
inline constexpr double c1 = 2.0 * h * c * c * 1e8;
/// Stefan-Boltzmann constant derived from the same constants as c1 and c2.
inline constexpr double sigma = 2.0 * pi * pi * pi * pi * pi * k_b * k_b * k_b * k_b /
                                (15.0 * h * h * h * c * c);
} // namespace phys

/// Spectral blackbody intensity I_b,eta(T) in W m^-2 sr^-1 (cm^-1)^-1.
inline double planck_intensity(double temperature, double eta) {
    if (!(temperature > 0.0) || !(eta > 0.0))
        throw Error(ErrorKind::domain, "planck_intensity requires T > 0 and eta > 0");
    return phys::c1 * eta * eta * eta / std::expm1(phys::c2 * eta / temperature);
}

/// Total blackbody intensity sigma T^4 / pi in W m^-2 sr^-1.
inline double blackbody_intensity(double temperature) {
    const double t2 = temperature * temperature;
    return phys::sigma * t2 * t2 / phys::pi;
}

namespace detail {

// integral_x^inf t^3/(e^t - 1) dt
inline double planck_upper_integral(double x) {
    constexpr double total = phys::pi * phys::pi * phys::pi * phys::pi / 15.0;
    if (x <= 0.0)
        return total;
    if (x < 2.0) {
        // integral_0^x via the Bernoulli expansion of t/(e^t - 1), valid for x < 2 pi
        // B_{2m} / (2m)! for m = 1..10
        static constexpr double b_over_fact[] = {
            1.0 / 12.0,
            -1.0 / 720.0,
            1.0 / 30240.0,
            -1.0 / 1209600.0,
            1.0 / 47900160.0,
            -691.0 / 1307674368000.0,
            1.0 / 74724249600.0,
            -3617.0 / 10670622842880000.0,
            43867.0 / 5109094217170944000.0,
            -174611.0 / 802857662698291200000.0,
        };
        double lower = x * x * x / 3.0 - x * x * x * x / 8.0;
        double xp = x * x * x * x * x; // x^(2m+3) at m = 1
        for (int m = 1; m <= 10; ++m) {
            lower += b_over_fact[m - 1] * xp / (2.0 * m + 3.0);
            xp *= x * x;
        }
        return total - lower;
    }
    double sum = 0.0;
    for (int n = 1; n <= 200; ++n) {
        const double dn = n;
        const double term = std::exp(-dn * x) / dn *
                            (x * x * x + 3.0 * x * x / dn + 6.0 * x / (dn * dn) + 6.0 / (dn * dn * dn));
        sum += term;
        if (term < 1e-17 * sum)
            break;
    }
    return sum;
}

} // namespace detail

/// Exact integral of I_b,eta(T) over [eta_lo, eta_hi] (eta_hi may be +inf).
inline double planck_band_integral(double temperature, double eta_lo, double eta_hi) {
    if (!(temperature > 0.0) || eta_lo < 0.0 || eta_hi < eta_lo)
        throw Error(ErrorKind::domain, "planck_band_integral: invalid band or temperature");
    constexpr double total = phys::pi * phys::pi * phys::pi * phys::pi / 15.0;
    const double scale = blackbody_intensity(temperature) / total;
    const double upper_lo = detail::planck_upper_integral(phys::c2 * eta_lo / temperature);
    const double upper_hi =
        std::isinf(eta_hi) ? 0.0 : detail::planck_upper_integral(phys::c2 * eta_hi / temperature);
    return scale * (upper_lo - upper_hi);
}

} // namespace fsck
