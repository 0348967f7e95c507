#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "fsck/error.hpp"

namespace fsck {

namespace detail {

// E_n(x) for x >= 1 by the modified Lentz continued fraction.
inline double expint_cf(int n, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    double b = x + n;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -static_cast<double>(i) * (n - 1 + i);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < eps)
            return h * std::exp(-x);
    }
    throw Error(ErrorKind::numeric, "expint continued fraction did not converge");
}

// E_1(x) for 0 < x < 1 by its power series.
inline double expint1_series(double x) {
    constexpr double euler = 0.57721566490153286061;
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= -x / k;
        const double add = term / k;
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum))
            break;
    }
    return -euler - std::log(x) - sum;
}

} // namespace detail

/// Exponential integral E_n(x) = int_1^inf exp(-x t) t^-n dt for n in {1,2,3}.
/// Small arguments use the E1 series and the upward recurrence; x >= 1 uses
/// the continued fraction for E_n directly, which avoids the cancellation
/// the recurrence suffers at large x.
inline double expint(int n, double x) {
    if (n < 1 || n > 3)
        throw Error(ErrorKind::domain, "expint: order must be 1, 2 or 3");
    if (!(x >= 0.0))
        throw Error(ErrorKind::domain, "expint: argument must be non-negative");
    if (x == 0.0)
        return n == 1 ? std::numeric_limits<double>::infinity() : 1.0 / (n - 1);
    if (std::isinf(x))
        return 0.0;
    if (x >= 1.0)
        return detail::expint_cf(n, x);
    double e = detail::expint1_series(x);
    const double ex = std::exp(-x);
    for (int k = 1; k < n; ++k)
        e = (ex - x * e) / k;
    return e;
}

inline double expint3(double x) { return expint(3, x); }

} // namespace fsck
