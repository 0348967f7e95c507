#pragma once

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "fsck/error.hpp"

namespace fsck {

/// Nodes in (0,1), ascending, with positive weights summing to one.
struct QuadratureSet {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j)
            s += weights[j] * f(nodes[j]);
        return s;
    }
};

/// First-kind Gauss-Chebyshev rule mapped to g in (0,1). The Chebyshev
/// weight function is folded back into the weights, w_j ~ sqrt(1 - x_j^2),
/// and the weights are then rescaled so the rule integrates dg exactly.
inline QuadratureSet gauss_chebyshev(int n) {
    if (n < 2)
        throw Error(ErrorKind::domain, "gauss_chebyshev needs at least 2 nodes");
    QuadratureSet q;
    q.nodes.resize(static_cast<std::size_t>(n));
    q.weights.resize(static_cast<std::size_t>(n));
    const double h = std::numbers::pi / (2.0 * n);
    for (int j = 1; j <= n; ++j) {
        const double theta = (2.0 * j - 1.0) * h;
        // j = 1 gives x near +1; store from the small-g end
        const auto slot = static_cast<std::size_t>(n - j);
        q.nodes[slot] = 0.5 * (std::cos(theta) + 1.0);
        q.weights[slot] = h * std::sin(theta);
    }
    const double total = std::accumulate(q.weights.begin(), q.weights.end(), 0.0);
    for (auto& w : q.weights)
        w /= total;
    return q;
}

/// n uniformly spaced nodes on [0,1] with trapezoid weights.
inline QuadratureSet uniform_trapezoid(int n) {
    if (n < 2)
        throw Error(ErrorKind::domain, "uniform_trapezoid needs at least 2 nodes");
    QuadratureSet q;
    const double h = 1.0 / (n - 1);
    for (int i = 0; i < n; ++i) {
        q.nodes.push_back(i * h);
        q.weights.push_back((i == 0 || i == n - 1) ? 0.5 * h : h);
    }
    return q;
}

} // namespace fsck
