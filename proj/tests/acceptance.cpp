// Acceptance run. Prints one PASS/FAIL line per criterion, plus a few
// informational lines, and exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fsck/fsck.hpp"

using namespace fsck;

namespace {

using clock_type = std::chrono::steady_clock;

double since(clock_type::time_point t) { return std::chrono::duration<double>(clock_type::now() - t).count(); }

struct Outcome {
    std::string id;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double limit = 0.0; // 0 = no runtime bound
};

std::vector<Outcome> outcomes;
std::vector<std::string> notes;
std::vector<double> slab_residuals; // every slab solve feeds AC10

std::string fmt(const char* f, auto... v) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, v...);
    return buf;
}

void record(Outcome o) {
    if (o.limit > 0.0 && o.seconds > o.limit) {
        o.pass = false;
        o.detail += fmt("; runtime %.0f s over the %.0f s bound", o.seconds, o.limit);
    }
    std::printf("%s %s  %s  [%.1f s]\n", o.id.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str(), o.seconds);
    std::fflush(stdout);
    outcomes.push_back(std::move(o));
}

void note(const std::string& s) {
    std::printf("  info: %s\n", s.c_str());
    std::fflush(stdout);
    notes.push_back(s);
}

RteSolution tracked(RteSolution s) {
    slab_residuals.push_back(energy_residual(s));
    return s;
}

// --- AC1 ---------------------------------------------------------------------

// Knots rebuilt from an index-tagged stable sort with long-double masses.
struct OracleKnots {
    std::vector<double> g, k;

    double at(double q) const {
        if (q <= 0.0)
            return k.front();
        const auto hi = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), q) - g.begin());
        if (hi >= g.size())
            return k.back();
        if (g[hi - 1] == q || k[hi - 1] == k[hi])
            return k[hi - 1];
        const double u = (q - g[hi - 1]) / (g[hi] - g[hi - 1]);
        if (k[hi - 1] <= 0.0)
            return k[hi - 1] + u * (k[hi] - k[hi - 1]);
        return k[hi - 1] * std::pow(k[hi] / k[hi - 1], u);
    }
};

OracleKnots oracle_knots(const SpectralField& f, double t) {
    std::vector<std::pair<double, std::size_t>> tagged;
    for (std::size_t i = 0; i < f.size(); ++i)
        tagged.emplace_back(f.kappa[i], i);
    std::stable_sort(tagged.begin(), tagged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<double, long double>> mass;
    long double total = 0;
    for (const auto& [k, i] : tagged) {
        const long double w = planck_intensity(t, f.eta[i]);
        if (mass.empty() || mass.back().first != k)
            mass.emplace_back(k, 0.0L);
        mass.back().second += w;
        total += w;
    }
    OracleKnots o{{0.0}, {tagged.front().first}};
    long double acc = 0;
    for (const auto& [k, m] : mass) {
        const long double mid = acc + 0.5L * m / total;
        acc += m / total;
        if (static_cast<double>(mid) > o.g.back() && mid < 1.0L) {
            o.g.push_back(static_cast<double>(mid));
            o.k.push_back(k);
        }
    }
    o.g.push_back(1.0);
    o.k.push_back(tagged.back().first);
    return o;
}

void ac1(SpectrumCache& cache) {
    const auto t0 = clock_type::now();
    const auto states = sample_states(200, 101);
    std::vector<int> monotone(states.size()), ends(states.size());
    std::vector<double> worst(states.size());
    parallel_for(states.size(), [&](std::size_t i) {
        const auto& s = states[i].state;
        const auto f = cache.spectrum(s);
        const auto d = build_kdist(f, s.temperature);
        bool mono = std::is_sorted(d.k.begin(), d.k.end());
        double prev = 0.0;
        for (int j = 0; j <= 1000; ++j) {
            const double v = invert_k(d, j / 1000.0);
            mono = mono && v >= prev;
            prev = v;
        }
        monotone[i] = mono;
        const auto [lo, hi] = std::minmax_element(f.kappa.begin(), f.kappa.end());
        ends[i] = invert_k(d, 0.0) == *lo && invert_k(d, 1.0) == *hi;
        const auto o = oracle_knots(f, s.temperature);
        std::mt19937_64 rng(1000 + i);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double w = 0.0;
        for (int p = 0; p < 50; ++p) {
            const double g = u(rng);
            const double want = o.at(g);
            w = std::max(w, std::abs(invert_k(d, g) - want) / std::max(want, 1e-300));
        }
        worst[i] = w;
    });
    const int n_mono = std::accumulate(monotone.begin(), monotone.end(), 0);
    const int n_ends = std::accumulate(ends.begin(), ends.end(), 0);
    const double w = *std::max_element(worst.begin(), worst.end());
    record({"AC1", n_mono == 200 && n_ends == 200 && w <= 1e-12,
            fmt("reordering: %d/200 monotone, %d/200 exact endpoints, worst probe vs re-sort %.2e (<= 1e-12)", n_mono,
                n_ends, w),
            since(t0), 60.0});
}

// --- AC2 ---------------------------------------------------------------------

void ac2(SpectrumCache& cache) {
    const auto t0 = clock_type::now();
    double unit = 0.0;
    for (const auto& s : sample_states(20, 202))
        for (int n : {8, 32}) {
            const auto p = stretch_exact(cache.spectrum(s.state), s.state.temperature, s.state.temperature,
                                         gauss_chebyshev(n));
            for (double a : p.a)
                unit = std::max(unit, std::abs(a - 1.0));
        }
    const auto grid = uniform_trapezoid(2001);
    const auto states = sample_states(50, 203);
    std::vector<double> dev(states.size());
    parallel_for(states.size(), [&](std::size_t i) {
        const auto& s = states[i];
        const auto p = stretch_exact(cache.spectrum(s.state), s.state.temperature, s.t0, grid);
        double integral = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j)
            integral += grid.weights[j] * p.a[j];
        dev[i] = std::abs(integral - 1.0);
    });
    const double trap = *std::max_element(dev.begin(), dev.end());
    record({"AC2", unit <= 1e-10 && trap <= 5e-3,
            fmt("stretch identities: max |a-1| at T=T0 %.2e (<= 1e-10), max |trapezoid of a - 1| %.2e over 50 states "
                "(<= 5e-3)",
                unit, trap),
            since(t0), 120.0});
}

// --- AC3 ---------------------------------------------------------------------

struct Ac3Data {
    std::vector<StateSample> states;
    std::vector<double> kp;
    double e8 = 0.0, e32 = 0.0;
    double seconds = 0.0;
};

Ac3Data ac3_exact(SpectrumCache& cache) {
    const auto t0 = clock_type::now();
    Ac3Data d;
    d.states = sample_states(20, 303);
    const auto q8 = gauss_chebyshev(8), q32 = gauss_chebyshev(32);
    double& e8 = d.e8;
    double& e32 = d.e32;
    double i8 = 0.0, i32 = 0.0;
    for (const auto& s : d.states) {
        const auto f = cache.spectrum(s.state);
        const double t = s.state.temperature;
        const double kp = planck_mean_lbl(f, t);
        d.kp.push_back(kp);
        e8 = std::max(e8, std::abs(planck_mean_fsck(q8.weights, stretch_exact(f, t, t, q8).ka) / kp - 1.0));
        e32 = std::max(e32, std::abs(planck_mean_fsck(q32.weights, stretch_exact(f, t, t, q32).ka) / kp - 1.0));
        i8 = std::max(i8, std::abs(planck_mean_fsck(q8.weights, stretch_exact(f, t, s.t0, q8).ka) / kp - 1.0));
        i32 = std::max(i32, std::abs(planck_mean_fsck(q32.weights, stretch_exact(f, t, s.t0, q32).ka) / kp - 1.0));
    }
    d.seconds = since(t0);
    note(fmt("AC3 with T0 drawn independently of T: max Planck-mean error %.1f%% (8-point), %.1f%% (32-point)",
             100.0 * i8, 100.0 * i32));
    return d;
}

void ac3_finish(const Ac3Data& d, const MlpModel& model) {
    const auto t0 = clock_type::now();
    const auto q8 = gauss_chebyshev(8);
    double esfm = 0.0;
    int hot = 0;
    for (std::size_t i = 0; i < d.states.size(); ++i) {
        const auto& s = d.states[i].state;
        if (s.temperature < 1000.0)
            continue;
        ++hot;
        std::vector<double> ka;
        for (double g : q8.nodes)
            ka.push_back(forward(model, std::vector<double>{s.temperature, s.temperature, s.x_co2, s.x_h2o, s.x_co, g})[1]);
        esfm = std::max(esfm, std::abs(planck_mean_fsck(q8.weights, ka) / d.kp[i] - 1.0));
    }
    record({"AC3", d.e32 <= 0.01 && d.e8 <= 0.04 && esfm <= 0.05,
            fmt("emission preservation over 20 states: 32-point %.2f%% (<= 1%%), 8-point %.2f%% (<= 4%%), trained "
                "network %.2f%% over %d states at T >= 1000 K (<= 5%%)",
                100.0 * d.e32, 100.0 * d.e8, 100.0 * esfm, hot),
            d.seconds + since(t0), 300.0});
}

// --- AC4 ---------------------------------------------------------------------

void ac4() {
    const auto t0 = clock_type::now();
    const auto q8 = gauss_chebyshev(8), q32 = gauss_chebyshev(32);
    const double s8 = std::abs(std::accumulate(q8.weights.begin(), q8.weights.end(), 0.0) - 1.0);
    const double s32 = std::abs(std::accumulate(q32.weights.begin(), q32.weights.end(), 0.0) - 1.0);
    double poly = 0.0;
    for (int d = 0; d <= 5; ++d)
        poly = std::max(poly, std::abs(q32.integrate([d](double g) { return std::pow(g, d); }) - 1.0 / (d + 1)));
    record({"AC4", s8 <= 2e-3 && s32 <= 1e-4 && poly <= 5e-3,
            fmt("quadrature: |sum w - 1| %.1e (n=8, <= 2e-3), %.1e (n=32, <= 1e-4); worst degree<=5 integral error "
                "%.2e (<= 5e-3)",
                s8, s32, poly),
            since(t0)});
}

// --- AC5 ---------------------------------------------------------------------

std::vector<long double> reference_forward(const MlpModel& m, const double* in) {
    std::vector<long double> a(m.inputs());
    for (std::size_t i = 0; i < m.inputs(); ++i)
        a[i] = (static_cast<long double>(in[i]) - m.in_min[i]) / (static_cast<long double>(m.in_max[i]) - m.in_min[i]);
    for (const auto& L : m.layers) {
        std::vector<long double> z(L.out);
        for (std::size_t o = 0; o < L.out; ++o) {
            long double s = L.b[o];
            for (std::size_t i = 0; i < L.in; ++i)
                s += static_cast<long double>(L.w[o * L.in + i]) * a[i];
            z[o] = L.act == Activation::relu ? std::max(s, 0.0L) : s;
        }
        a = std::move(z);
    }
    for (auto& v : a)
        v = std::pow(10.0L, v);
    return a;
}

MlpModel small_net(std::uint64_t seed) {
    auto m = MlpModel::create({6, 8, 8, 2}, std::vector<double>(6, 0.0), std::vector<double>(6, 1.0),
                              {OutputTransform::identity, OutputTransform::identity}, {0.0, 0.0});
    he_init(m, seed);
    std::mt19937_64 rng(seed + 1);
    std::normal_distribution<double> n(0.0, 0.3);
    for (auto& L : m.layers)
        for (auto& b : L.b)
            b = n(rng);
    return m;
}

void ac5() {
    const auto t0 = clock_type::now();
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> nd(0.0, 0.1);

    auto sfm = make_sfm();
    he_init(sfm, 5);
    for (auto& L : sfm.layers)
        for (auto& b : L.b)
            b = nd(rng);
    double fwd = 0.0;
    for (int r = 0; r < 200; ++r) {
        const std::vector<double> in{300 + 2700 * u(rng), 300 + 2700 * u(rng), u(rng), u(rng), 0.5 * u(rng), u(rng)};
        const auto got = forward(sfm, in);
        const auto ref = reference_forward(sfm, in.data());
        for (int o = 0; o < 2; ++o)
            fwd = std::max(fwd, std::abs(got[o] / static_cast<double>(ref[o]) - 1.0));
    }

    double fd = 0.0;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto m = small_net(seed);
        Batch b;
        b.rows = 16;
        for (int i = 0; i < 16 * 6; ++i)
            b.x.push_back(u(rng));
        for (int i = 0; i < 16 * 2; ++i)
            b.y.push_back(2.0 * u(rng) - 1.0);
        const double l2 = 1e-3, h = 1e-6;
        const auto g = grad(m, b, l2);
        auto check = [&](std::vector<double>& p, const std::vector<double>& gp) {
            for (std::size_t i = 0; i < p.size(); ++i) {
                const double keep = p[i];
                p[i] = keep + h;
                const double up = objective(m, b, l2);
                p[i] = keep - h;
                const double dn = objective(m, b, l2);
                p[i] = keep;
                const double c = (up - dn) / (2.0 * h);
                fd = std::max(fd, std::abs(c - gp[i]) / std::max({std::abs(c), std::abs(gp[i]), 1e-3}));
            }
        };
        for (std::size_t l = 0; l < m.layers.size(); ++l) {
            check(m.layers[l].w, g.w[l]);
            check(m.layers[l].b, g.b[l]);
        }
    }

    // one Adam step from zero moments moves each parameter by lr g / (|g| + eps)
    auto m = small_net(9);
    const auto before = m;
    Batch b;
    b.rows = 8;
    for (int i = 0; i < 8 * 6; ++i)
        b.x.push_back(u(rng));
    for (int i = 0; i < 8 * 2; ++i)
        b.y.push_back(u(rng));
    const auto g = grad(m, b, 0.0);
    const double lr = 1.246e-3;
    AdamState st(m, lr);
    adam_step(m, st, g);
    double adam = 0.0;
    for (std::size_t l = 0; l < m.layers.size(); ++l)
        for (std::size_t i = 0; i < m.layers[l].w.size(); ++i) {
            const double gi = g.w[l][i];
            const double want = -lr * gi / (std::abs(gi) + st.eps);
            adam = std::max(adam, std::abs((m.layers[l].w[i] - before.layers[l].w[i]) - want) / lr);
        }

    const auto dir = std::filesystem::temp_directory_path() / "fsck_acceptance_model.sfmw";
    save_model(sfm, dir.string());
    const auto back = load_model(dir.string());
    const auto size = std::filesystem::file_size(dir);
    const bool round = back == sfm && serialize_model(back) == serialize_model(sfm);
    std::filesystem::remove(dir);
    const auto params = sfm.parameter_count();
    record({"AC5",
            fwd <= 1e-12 && fd <= 1e-6 && adam <= 1e-9 && round && params == 30122 && size < 430000,
            fmt("network engine: forward vs long-double evaluator %.1e (<= 1e-12), gradient vs central differences "
                "%.1e (<= 1e-6), Adam first step off closed form by %.1e lr, round trip %s, %zu parameters, file "
                "%ju bytes (< 430000)",
                fwd, fd, adam, round ? "bitwise" : "DIFFERS", params, static_cast<std::uintmax_t>(size)),
            since(t0), 120.0});
}

// --- AC6 ---------------------------------------------------------------------

MlpModel ac6(SpectrumCache& cache) {
    const auto t0 = clock_type::now();
    const auto quad = gauss_chebyshev(8);
    const auto states = sample_states(2000, 42);
    const auto rows = label_states(states, quad, cache);
    const double label_s = since(t0);

    const auto arch = make_sfm();
    const auto batch = to_batch(arch, rows);
    TrainConfig cfg; // defaults carry the published hyperparameters
    const auto res = train(arch, batch, cfg);
    const double train_s = since(t0) - label_s;

    // determinism: a short rerun twice, and relabeling a slice single-threaded
    TrainConfig shortcfg = cfg;
    shortcfg.max_epochs = 3;
    const bool same_model = serialize_model(train(arch, batch, shortcfg).model) ==
                            serialize_model(train(arch, batch, shortcfg).model);
    const std::vector<StateSample> slice(states.begin(), states.begin() + 20);
    const auto relabel = label_states(slice, quad, cache, 1);
    const bool same_rows = std::equal(relabel.begin(), relabel.end(), rows.begin());

    record({"AC6", res.best_metric < 5e-3 && same_model && same_rows,
            fmt("training on 2000 states x 8 nodes: validation metric %.3e at epoch %zu (< 5e-3; full-scale "
                "reference 5e-4, not asserted); reruns %s; labeling %.0f s, training %.0f s",
                res.best_metric, res.best_epoch, same_model && same_rows ? "identical" : "DIFFER", label_s, train_s),
            since(t0), 1800.0});
    return res.model;
}

// --- AC7 ---------------------------------------------------------------------

// Discrete ordinates with exact in-cell attenuation; only the angular rule
// approximates. Gauss-Legendre in u with mu = u^2.
double marched_wall_flux(double tau, double t, std::size_t cells) {
    const int n = 64;
    std::vector<double> x, w;
    for (int i = 1; i <= n; ++i) {
        double z = std::cos(phys::pi * (i - 0.25) / (n + 0.5)), dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        x.push_back(0.5 * (1.0 - z));
        w.push_back(1.0 / ((1.0 - z * z) * dp * dp));
    }
    const double s = phys::sigma * std::pow(t, 4) / phys::pi, dtau = tau / static_cast<double>(cells);
    double q = 0.0;
    for (int a = 0; a < n; ++a) {
        const double mu = x[a] * x[a], wmu = 2.0 * x[a] * w[a];
        double i = 0.0;
        for (std::size_t c = 0; c < cells; ++c)
            i = s + (i - s) * std::exp(-dtau / mu);
        q += 2.0 * phys::pi * wmu * mu * i;
    }
    return q;
}

SpectralSource gray_channel(std::size_t cells, double k_cm) {
    SpectralSource s;
    s.name = "gray";
    s.weights = {1.0};
    s.k.assign(cells, {k_cm});
    s.a.assign(cells, {1.0});
    return s;
}

void ac7(SpectrumCache& cache, const MlpModel& model) {
    const auto t0 = clock_type::now();
    double wall = 0.0;
    const double t = 1500.0;
    for (double tau : {0.1, 1.0, 5.0}) {
        const auto p = uniform_slab(ThermoState{t, 0.1, 0.1, 0.0}, t, 1.0, 40);
        const auto sol = tracked(solve_slab_exact(p, gray_channel(40, tau / 100.0)));
        const double closed = phys::sigma * std::pow(t, 4) * (1.0 - 2.0 * expint3(tau));
        const double oracle = marched_wall_flux(tau, t, 2000);
        wall = std::max({wall, std::abs(sol.q.back() / oracle - 1.0), std::abs(closed / oracle - 1.0)});
    }

    // Uniform slab at 7.5% CO2, 17.5% H2O, 2.5% CO, 1750 K against T0 = 950 K
    const auto quad = gauss_chebyshev(8);
    const auto p = uniform_slab(ThermoState{1750.0, 0.075, 0.175, 0.025}, 950.0, 1.0, 40);
    const auto exact = tracked(solve_slab_exact(p, exact_source(p, quad, cache)));
    const auto sfm = tracked(solve_slab_exact(p, sfm_source(p, quad, model)));
    const auto r = compare_solutions({exact, sfm});
    const double dev = r.deviations[1].max_divq;
    record({"AC7", wall <= 2e-3 && dev <= 0.05,
            fmt("slab: gray wall flux vs angular/spatial oracle %.1e (<= 2e-3); trained network vs exact 8-point "
                "model, max relative div q deviation %.2f%% (<= 5%%)",
                wall, 100.0 * dev),
            since(t0), 300.0});

    const auto fields = cell_spectra(p, cache);
    const auto lbl = tracked(solve_slab_lbl(p, fields));
    const auto r2 = compare_solutions({lbl, exact, sfm});
    note(fmt("AC7 against the line-by-line slab: exact 8-point %.2f%%, network %.2f%% max relative div q",
             100.0 * r2.deviations[1].max_divq, 100.0 * r2.deviations[2].max_divq));
}

// --- AC8 ---------------------------------------------------------------------

void ac8(SpectrumCache& cache) {
    const auto t0 = clock_type::now();
    // a-values: 32- and 512-node finite differences against the exact profile at the same nodes
    const auto states = sample_states(20, 808);
    int coarse_worse = 0;
    double worst_ratio = 0.0;
    for (const auto& s : states) {
        const auto f = cache.spectrum(s.state);
        const auto sorted = sort_spectrum(f);
        const auto dt = detail::distribution_from_sorted(sorted, s.state.temperature);
        const auto d0 = detail::distribution_from_sorted(sorted, s.t0);
        double dev[2];
        int slot = 0;
        for (int n : {32, 512}) {
            const auto q = gauss_chebyshev(n);
            const auto disc = stretch_discrete(sample_kdist(dt, q.nodes), sample_kdist(d0, q.nodes), q.size());
            const auto ex = stretch_sorted(sorted, s.state.temperature, s.t0, q.nodes);
            double sum = 0.0;
            for (std::size_t j = 0; j < q.size(); ++j)
                sum += std::abs(disc.a[j] - ex.a[j]) / ex.a[j];
            dev[slot++] = sum / static_cast<double>(q.size());
        }
        coarse_worse += dev[0] > dev[1];
        worst_ratio = std::max(worst_ratio, dev[1] / dev[0]);
    }

    // slab profiles: 32-node finite-difference model vs 32-node exact-ka model,
    // both scored against the exact model on 128 nodes
    const auto q32 = gauss_chebyshev(32), q128 = gauss_chebyshev(128);
    int exact_wins = 0, exact_wins_lbl = 0;
    const int profiles = 10;
    for (int seed = 1; seed <= profiles; ++seed) {
        const auto p = random_profile(static_cast<std::uint64_t>(seed));
        const auto ref = tracked(solve_slab_exact(p, exact_source(p, q128, cache)));
        const auto ex = tracked(solve_slab_exact(p, exact_source(p, q32, cache)));
        const auto di = tracked(solve_slab_exact(p, discrete_source(p, q32, cache)));
        const auto r = compare_solutions({ref, ex, di});
        exact_wins += r.deviations[2].max_divq > r.deviations[1].max_divq;
        const auto fields = cell_spectra(p, cache);
        const auto lbl = tracked(solve_slab_lbl(p, fields));
        const auto r2 = compare_solutions({lbl, ex, di});
        exact_wins_lbl += r2.deviations[2].max_divq > r2.deviations[1].max_divq;
    }
    const double share = static_cast<double>(exact_wins) / profiles;
    record({"AC8", coarse_worse == static_cast<int>(states.size()) && share >= 0.8,
            fmt("degradation: 32-node finite-difference a worse than 512-node on %d/%zu states (all required; worst "
                "512/32 error ratio %.2f); exact-ka model beats the 32-node discrete model on %d/%d slab profiles "
                "(>= 80%%)",
                coarse_worse, states.size(), worst_ratio, exact_wins, profiles),
            since(t0)});
    note(fmt("AC8 scored against the line-by-line slab instead: exact-ka model wins on %d/%d profiles", exact_wins_lbl,
             profiles));
}

// --- AC9 ---------------------------------------------------------------------

void ac9(SpectrumCache& cache, const MlpModel& model) {
    const auto t0 = clock_type::now();
    TableAxes axes;
    axes.axis[0] = {300.0, 1200.0, 2100.0, 3000.0};
    axes.axis[1] = axes.axis[0];
    axes.axis[2] = {0.0, 1.0};
    axes.axis[3] = {0.0, 1.0};
    axes.axis[4] = {0.0, 0.5};
    const auto quad = gauss_chebyshev(8);
    const auto table = build_table(axes, quad, cache);

    const std::size_t n = 10000;
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> t(300.0, 3000.0), u(0.0, 1.0);
    std::vector<StateSample> states;
    while (states.size() < n) {
        StateSample s{ThermoState{t(rng), u(rng), u(rng), 0.5 * u(rng)}, t(rng)};
        if (s.state.total_absorber() <= 1.0 && s.state.total_absorber() > 0.0)
            states.push_back(s);
    }
    std::vector<double> in;
    in.reserve(n * quad.size() * sfm_inputs);
    for (const auto& s : states)
        for (double g : quad.nodes)
            in.insert(in.end(), {s.state.temperature, s.t0, s.state.x_co2, s.state.x_h2o, s.state.x_co, g});

    double sink = 0.0;
    auto run_table = [&] {
        for (const auto& s : states)
            sink += interp(table, s.state, s.t0)[0].ka;
    };
    run_table();
    sink += forward_batch(model, in)[0];
    auto c = clock_type::now();
    run_table();
    const double table_s = since(c);
    c = clock_type::now();
    sink += forward_batch(model, in)[0];
    const double sfm_s = since(c);
    // continuous temperatures miss the spectrum cache, so synthesis is part of the cost
    const std::size_t n_exact = 3;
    c = clock_type::now();
    for (std::size_t i = 0; i < n_exact; ++i)
        sink += kdist_at_state(states[i].state, states[i].t0, quad, cache)[0].ka;
    const double exact_s = since(c);

    const double per_table = table_s / n, per_sfm = sfm_s / n, per_exact = exact_s / n_exact;
    record({"AC9", std::isfinite(sink) && per_table < per_sfm && per_sfm < per_exact && sfm_s < 5.0,
            fmt("per-state cost: table %.2f us < network %.2f us < exact %.0f ms; 10000-state network batch %.3f s "
                "single-threaded (< 5 s; full-scale reference 0.59 s)",
                1e6 * per_table, 1e6 * per_sfm, 1e3 * per_exact, sfm_s),
            since(t0)});
}

// --- AC10 --------------------------------------------------------------------

void ac10() {
    const double worst = *std::max_element(slab_residuals.begin(), slab_residuals.end());
    record({"AC10", worst <= 1e-3,
            fmt("energy consistency: worst |integral of div q - flux jump| %.1e over %zu slab runs (<= 1e-3)", worst,
                slab_residuals.size()),
            0.0});
}

} // namespace

int main() {
    const auto start = clock_type::now();
    SpectrumCache cache(make_catalog(1), SpectralGrid{});
    try {
        ac1(cache);
        ac2(cache);
        const auto ac3_data = ac3_exact(cache);
        ac4();
        ac5();
        const auto model = ac6(cache);
        ac3_finish(ac3_data, model);
        ac7(cache, model);
        ac8(cache);
        ac9(cache, model);
        ac10();
    } catch (const std::exception& e) {
        std::printf("aborted: %s\n", e.what());
        return 2;
    }
    std::sort(outcomes.begin(), outcomes.end(), [](const Outcome& a, const Outcome& b) {
        return std::stoi(a.id.substr(2)) < std::stoi(b.id.substr(2));
    });
    std::printf("\nsummary (%.0f s)\n", since(start));
    int failed = 0;
    for (const auto& o : outcomes) {
        std::printf("%-4s %s\n", o.id.c_str(), o.pass ? "PASS" : "FAIL");
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(outcomes.size()) - failed, outcomes.size());
    return failed == 0 ? 0 : 1;
}
