#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "fsck/error.hpp"

namespace fsck {

/// Log-uniform search box for (learning_rate, l2_reg).
struct SearchSpace {
    double lr_min = 1e-5, lr_max = 1e-1;
    double l2_min = 1e-9, l2_max = 1e-3;

    void validate() const {
        if (!(lr_min > 0.0 && lr_max > lr_min && l2_min > 0.0 && l2_max > l2_min))
            throw Error(ErrorKind::config, "search space is empty or not log-positive");
    }
};

struct TuneSample {
    double learning_rate;
    double l2_reg;
    double value;
    double best_so_far;
};

struct TuneResult {
    double learning_rate = 0.0;
    double l2_reg = 0.0;
    double value = std::numeric_limits<double>::infinity();
    std::vector<TuneSample> trace;
};

struct TuneOptions {
    std::size_t budget = 100;
    std::uint64_t seed = 1;
    bool random_search = false;
    std::size_t initial_random = 5;  // space-filling draws before the surrogate
    std::size_t candidates = 2000;   // EI is maximized over this many random points
    double length_scale = 0.25;      // in unit-box coordinates
    double noise = 1e-6;
};

namespace detail {

inline double norm_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Exact GP posterior with an isotropic squared-exponential kernel on points
// in the unit square; targets are standardized before fitting.
class GaussianProcess {
public:
    GaussianProcess(const std::vector<Eigen::Vector2d>& x, const std::vector<double>& y, double ell, double noise)
        : x_(x), ell_(ell) {
        const auto n = static_cast<Eigen::Index>(x.size());
        Eigen::VectorXd yy(n);
        for (Eigen::Index i = 0; i < n; ++i)
            yy(i) = y[static_cast<std::size_t>(i)];
        mean_ = yy.mean();
        scale_ = std::sqrt((yy.array() - mean_).square().mean());
        if (!(scale_ > 0.0))
            scale_ = 1.0;
        yy = (yy.array() - mean_) / scale_;
        Eigen::MatrixXd k(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                k(i, j) = kernel(x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)]);
        k.diagonal().array() += noise;
        chol_ = k.llt();
        if (chol_.info() != Eigen::Success)
            throw Error(ErrorKind::numeric, "GP kernel matrix not positive definite");
        alpha_ = chol_.solve(yy);
    }

    // posterior mean and standard deviation in the original units
    std::pair<double, double> predict(const Eigen::Vector2d& p) const {
        const auto n = static_cast<Eigen::Index>(x_.size());
        Eigen::VectorXd ks(n);
        for (Eigen::Index i = 0; i < n; ++i)
            ks(i) = kernel(p, x_[static_cast<std::size_t>(i)]);
        const double mu = ks.dot(alpha_);
        const double var = std::max(1.0 - ks.dot(chol_.solve(ks)), 1e-12);
        return {mean_ + scale_ * mu, scale_ * std::sqrt(var)};
    }

private:
    double kernel(const Eigen::Vector2d& a, const Eigen::Vector2d& b) const {
        return std::exp(-0.5 * (a - b).squaredNorm() / (ell_ * ell_));
    }

    std::vector<Eigen::Vector2d> x_;
    double ell_;
    double mean_ = 0.0, scale_ = 1.0;
    Eigen::LLT<Eigen::MatrixXd> chol_;
    Eigen::VectorXd alpha_;
};

} // namespace detail

/// Sequential minimization of objective(lr, l2) over log-parameters using
/// expected improvement on a GP surrogate; pure random search on request.
inline TuneResult tune(const std::function<double(double, double)>& objective, const SearchSpace& space,
                       const TuneOptions& opt = {}) {
    space.validate();
    if (opt.budget < 1)
        throw Error(ErrorKind::config, "tuning budget must be at least 1");
    const double a0 = std::log10(space.lr_min), a1 = std::log10(space.lr_max);
    const double b0 = std::log10(space.l2_min), b1 = std::log10(space.l2_max);
    auto to_params = [&](const Eigen::Vector2d& u) {
        return std::pair{std::pow(10.0, a0 + u(0) * (a1 - a0)), std::pow(10.0, b0 + u(1) * (b1 - b0))};
    };

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Eigen::Vector2d> xs;
    std::vector<double> ys;
    TuneResult res;
    for (std::size_t it = 0; it < opt.budget; ++it) {
        Eigen::Vector2d next(unit(rng), unit(rng));
        if (!opt.random_search && it >= opt.initial_random && !ys.empty()) {
            const detail::GaussianProcess gp(xs, ys, opt.length_scale, opt.noise);
            const double best = *std::min_element(ys.begin(), ys.end());
            double best_ei = -1.0;
            for (std::size_t c = 0; c < opt.candidates; ++c) {
                const Eigen::Vector2d cand(unit(rng), unit(rng));
                const auto [mu, sd] = gp.predict(cand);
                const double z = (best - mu) / sd;
                const double ei = (best - mu) * detail::norm_cdf(z) + sd * detail::norm_pdf(z);
                if (ei > best_ei) {
                    best_ei = ei;
                    next = cand;
                }
            }
        }
        const auto [lr, l2] = to_params(next);
        const double v = objective(lr, l2);
        if (!std::isfinite(v))
            throw Error(ErrorKind::numeric, "tuning objective returned a non-finite value");
        xs.push_back(next);
        ys.push_back(v);
        if (v < res.value) {
            res.value = v;
            res.learning_rate = lr;
            res.l2_reg = l2;
        }
        res.trace.push_back({lr, l2, v, res.value});
    }
    return res;
}

} // namespace fsck
