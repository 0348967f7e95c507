#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fsck/error.hpp"
#include "fsck/mlp.hpp"

namespace fsck {

/// Rows of raw inputs and targets already in the model's transformed space.
struct Batch {
    std::vector<double> x; // rows x inputs
    std::vector<double> y; // rows x outputs
    std::size_t rows = 0;
};

/// Same shapes as the model's weights and biases.
struct Gradient {
    std::vector<std::vector<double>> w;
    std::vector<std::vector<double>> b;
    double loss = 0.0;
};

struct TrainConfig {
    double learning_rate = 1.246e-3;
    double l2_reg = 1e-7;
    std::size_t batch_size = 1024;
    std::size_t max_epochs = 2000;
    std::size_t patience = 20;
    // learning_rate is the initial rate: a stalled run halves it up to
    // max_decays times before stopping. 0 gives plain early stopping.
    double lr_decay = 0.5;
    std::size_t max_decays = 4;
    std::uint64_t seed = 1;

    void validate() const {
        if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
            throw Error(ErrorKind::config, "learning_rate must be positive");
        if (!(l2_reg >= 0.0) || !std::isfinite(l2_reg))
            throw Error(ErrorKind::config, "l2_reg must be non-negative");
        if (batch_size < 1)
            throw Error(ErrorKind::config, "batch_size must be at least 1");
        if (max_epochs < 1)
            throw Error(ErrorKind::config, "max_epochs must be at least 1");
        if (!(lr_decay > 0.0 && lr_decay < 1.0))
            throw Error(ErrorKind::config, "lr_decay must lie in (0, 1)");
    }
};

namespace detail {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstWeights = Eigen::Map<const RowMat>;

inline RowMat normalized_inputs(const MlpModel& m, std::span<const double> x, std::size_t rows) {
    RowMat out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(m.inputs()));
    for (std::size_t r = 0; r < rows; ++r)
        normalize_inputs(m, x.data() + r * m.inputs(), out.row(static_cast<Eigen::Index>(r)).data());
    return out;
}

// Forward pass over a batch, keeping pre-activations for backprop.
inline void forward_cached(const MlpModel& m, const RowMat& x, std::vector<RowMat>& act) {
    act.resize(m.layers.size() + 1);
    act[0] = x;
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        const auto& L = m.layers[l];
        ConstWeights w(L.w.data(), static_cast<Eigen::Index>(L.out), static_cast<Eigen::Index>(L.in));
        Eigen::Map<const Eigen::RowVectorXd> b(L.b.data(), static_cast<Eigen::Index>(L.out));
        act[l + 1] = act[l] * w.transpose();
        act[l + 1].rowwise() += b;
        if (L.act == Activation::relu)
            act[l + 1] = act[l + 1].cwiseMax(0.0);
        if (!act[l + 1].allFinite())
            throw Error(ErrorKind::numeric, "non-finite activations at layer " + std::to_string(l));
    }
}

// Mean squared error over rows and outputs plus l2 * sum of squared weights
// of every layer except the output layer.
inline double loss_and_grad(const MlpModel& m, const RowMat& x, const RowMat& y, double l2, Gradient& g) {
    std::vector<RowMat> act;
    forward_cached(m, x, act);
    const auto n = static_cast<double>(x.rows() * y.cols());
    RowMat delta = act.back() - y;
    double loss = delta.squaredNorm() / n;
    delta *= 2.0 / n;

    const std::size_t nl = m.layers.size();
    g.w.resize(nl);
    g.b.resize(nl);
    for (std::size_t l = nl; l-- > 0;) {
        const auto& L = m.layers[l];
        ConstWeights w(L.w.data(), static_cast<Eigen::Index>(L.out), static_cast<Eigen::Index>(L.in));
        g.w[l].resize(L.w.size());
        g.b[l].resize(L.b.size());
        Eigen::Map<RowMat> gw(g.w[l].data(), static_cast<Eigen::Index>(L.out), static_cast<Eigen::Index>(L.in));
        Eigen::Map<Eigen::RowVectorXd> gb(g.b[l].data(), static_cast<Eigen::Index>(L.out));
        gw.noalias() = delta.transpose() * act[l];
        gb = delta.colwise().sum();
        if (l + 1 < nl && l2 > 0.0) {
            gw += 2.0 * l2 * w;
            loss += l2 * w.squaredNorm();
        }
        if (l > 0) {
            RowMat prev = delta * w;
            // ReLU subgradient at exactly zero is taken as zero
            if (m.layers[l - 1].act == Activation::relu)
                prev = (act[l].array() > 0.0).select(prev, 0.0);
            delta = std::move(prev);
        }
    }
    g.loss = loss;
    return loss;
}

inline RowMat targets(const MlpModel& m, std::span<const double> y, std::size_t rows) {
    RowMat out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(m.outputs()));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t o = 0; o < m.outputs(); ++o)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(o)) = y[r * m.outputs() + o];
    return out;
}

} // namespace detail

/// Exact gradient of the training objective on one batch.
inline Gradient grad(const MlpModel& m, const Batch& batch, double l2_reg) {
    if (batch.rows == 0)
        throw Error(ErrorKind::validation, "grad: empty batch");
    if (batch.x.size() != batch.rows * m.inputs() || batch.y.size() != batch.rows * m.outputs())
        throw Error(ErrorKind::validation, "grad: batch shape does not match the model");
    Gradient g;
    detail::loss_and_grad(m, detail::normalized_inputs(m, batch.x, batch.rows),
                          detail::targets(m, batch.y, batch.rows), l2_reg, g);
    return g;
}

/// Objective value without the gradient (finite-difference checks).
inline double objective(const MlpModel& m, const Batch& batch, double l2_reg) {
    return grad(m, batch, l2_reg).loss;
}

struct AdamState {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t t = 0;
    std::vector<std::vector<double>> mw, vw, mb, vb;

    explicit AdamState(const MlpModel& m, double lr = 1e-3) : learning_rate(lr) {
        for (const auto& L : m.layers) {
            mw.emplace_back(L.w.size(), 0.0);
            vw.emplace_back(L.w.size(), 0.0);
            mb.emplace_back(L.b.size(), 0.0);
            vb.emplace_back(L.b.size(), 0.0);
        }
    }
};

/// Bias-corrected Adam update in place.
inline void adam_step(MlpModel& m, AdamState& s, const Gradient& g) {
    if (g.w.size() != m.layers.size() || s.mw.size() != m.layers.size())
        throw Error(ErrorKind::validation, "adam_step: gradient or state shape mismatch");
    ++s.t;
    const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.t));
    const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.t));
    auto update = [&](std::vector<double>& p, std::vector<double>& mm, std::vector<double>& vv,
                      const std::vector<double>& gg) {
        if (gg.size() != p.size())
            throw Error(ErrorKind::validation, "adam_step: gradient shape mismatch");
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!std::isfinite(gg[i]))
                throw Error(ErrorKind::numeric, "adam_step: non-finite gradient");
            mm[i] = s.beta1 * mm[i] + (1.0 - s.beta1) * gg[i];
            vv[i] = s.beta2 * vv[i] + (1.0 - s.beta2) * gg[i] * gg[i];
            const double mh = mm[i] / c1;
            const double vh = vv[i] / c2;
            p[i] -= s.learning_rate * mh / (std::sqrt(vh) + s.eps);
        }
    };
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        update(m.layers[l].w, s.mw[l], s.vw[l], g.w[l]);
        update(m.layers[l].b, s.mb[l], s.vb[l], g.b[l]);
    }
}

/// He-style initialization: weights ~ N(0, 2 / fan_in), zero biases.
inline void he_init(MlpModel& m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (auto& L : m.layers) {
        std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / static_cast<double>(L.in)));
        for (auto& v : L.w)
            v = dist(rng);
        std::fill(L.b.begin(), L.b.end(), 0.0);
    }
}

/// Mean of the per-output metric values on a batch.
inline double batch_metric(const MlpModel& m, const Batch& batch) {
    std::vector<double> scratch(2 * m.widest());
    const std::size_t no = m.outputs();
    std::vector<double> pred(batch.rows * no);
    for (std::size_t r = 0; r < batch.rows; ++r)
        detail::forward_raw(m, batch.x.data() + r * m.inputs(), pred.data() + r * no, scratch.data());
    double total = 0.0;
    std::vector<double> yt(batch.rows), yp(batch.rows);
    for (std::size_t o = 0; o < no; ++o) {
        for (std::size_t r = 0; r < batch.rows; ++r) {
            yt[r] = batch.y[r * no + o];
            yp[r] = pred[r * no + o];
        }
        total += metric(yt, yp);
    }
    return total / static_cast<double>(no);
}

struct TrainResult {
    MlpModel model;
    std::vector<double> val_metric;  // per epoch
    std::vector<double> train_loss;  // per epoch, mean over batches
    std::size_t best_epoch = 0;
    double best_metric = 0.0;
};

/// Seeded 90/10 split of row indices.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_rows(std::size_t rows,
                                                                                std::uint64_t seed) {
    std::vector<std::size_t> idx(rows);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed ^ 0x5EEDF00DULL);
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t n_val = std::max<std::size_t>(2, rows / 10);
    if (rows < n_val + 1)
        throw Error(ErrorKind::validation, "dataset too small to split");
    std::vector<std::size_t> val(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
    std::vector<std::size_t> tr(idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
    return {tr, val};
}

inline Batch gather(const Batch& all, std::span<const std::size_t> idx, std::size_t nin, std::size_t nout) {
    Batch b;
    b.rows = idx.size();
    b.x.resize(b.rows * nin);
    b.y.resize(b.rows * nout);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        std::copy_n(all.x.begin() + static_cast<std::ptrdiff_t>(idx[r] * nin), nin, b.x.begin() + static_cast<std::ptrdiff_t>(r * nin));
        std::copy_n(all.y.begin() + static_cast<std::ptrdiff_t>(idx[r] * nout), nout, b.y.begin() + static_cast<std::ptrdiff_t>(r * nout));
    }
    return b;
}

using EpochCallback = std::function<void(std::size_t epoch, double loss, double val_metric)>;

/// Mini-batch Adam with early stopping on the validation metric. Single
/// threaded by contract: the same seed, config and data give the same model.
inline TrainResult train(MlpModel init, const Batch& data, const TrainConfig& cfg,
                         const EpochCallback& on_epoch = {}) {
    cfg.validate();
    init.validate();
    const std::size_t nin = init.inputs(), nout = init.outputs();
    if (data.x.size() != data.rows * nin || data.y.size() != data.rows * nout)
        throw Error(ErrorKind::validation, "train: dataset shape does not match the model");
    auto [tr_idx, val_idx] = split_rows(data.rows, cfg.seed);
    const Batch val = gather(data, val_idx, nin, nout);

    MlpModel m = std::move(init);
    he_init(m, cfg.seed);
    // start the output biases at the mean target so early epochs fit shape
    for (std::size_t o = 0; o < nout; ++o) {
        double mean = 0.0;
        for (auto r : tr_idx)
            mean += data.y[r * nout + o];
        m.layers.back().b[o] = mean / static_cast<double>(tr_idx.size());
    }

    const detail::RowMat x_all = detail::normalized_inputs(m, data.x, data.rows);
    const detail::RowMat y_all = detail::targets(m, data.y, data.rows);

    AdamState opt(m, cfg.learning_rate);
    std::mt19937_64 rng(cfg.seed * 0x9E3779B97F4A7C15ULL + 7);
    TrainResult res;
    res.model = m;
    res.best_metric = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0, decays = 0;
    Gradient g;
    detail::RowMat xb, yb;
    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        std::shuffle(tr_idx.begin(), tr_idx.end(), rng);
        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < tr_idx.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(tr_idx.size(), start + cfg.batch_size);
            const auto nb = static_cast<Eigen::Index>(end - start);
            xb.resize(nb, static_cast<Eigen::Index>(nin));
            yb.resize(nb, static_cast<Eigen::Index>(nout));
            for (std::size_t r = start; r < end; ++r) {
                xb.row(static_cast<Eigen::Index>(r - start)) = x_all.row(static_cast<Eigen::Index>(tr_idx[r]));
                yb.row(static_cast<Eigen::Index>(r - start)) = y_all.row(static_cast<Eigen::Index>(tr_idx[r]));
            }
            try {
                loss_sum += detail::loss_and_grad(m, xb, yb, cfg.l2_reg, g);
                if (!std::isfinite(g.loss))
                    throw Error(ErrorKind::numeric, "non-finite loss");
                adam_step(m, opt, g);
            } catch (const Error& e) {
                throw Error(ErrorKind::numeric, "training diverged at epoch " + std::to_string(epoch) + ", batch " +
                                                    std::to_string(batches) + ": " + e.what());
            }
            ++batches;
        }
        const double vm = batch_metric(m, val);
        res.train_loss.push_back(loss_sum / static_cast<double>(batches));
        res.val_metric.push_back(vm);
        if (on_epoch)
            on_epoch(epoch, res.train_loss.back(), vm);
        if (vm < res.best_metric) {
            res.best_metric = vm;
            res.best_epoch = epoch;
            res.model = m;
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            if (decays == cfg.max_decays)
                break;
            ++decays;
            opt.learning_rate *= cfg.lr_decay;
            since_best = 0;
        }
    }
    return res;
}

} // namespace fsck
