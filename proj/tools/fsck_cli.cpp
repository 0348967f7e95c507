// fsck command-line front end. Each subcommand reads a flat key = value
// config (optional), applies command-line overrides, writes its outputs to
// --out-dir and echoes the resolved settings next to them.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsck/config.hpp"
#include "fsck/fsck.hpp"

namespace fs = std::filesystem;
using namespace fsck;

namespace {

enum Exit { ok = 0, config_error = 2, data_error = 3, numeric_error = 4 };

int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::config:
        return config_error;
    case ErrorKind::numeric:
        return numeric_error;
    default:
        return data_error;
    }
}

struct Common {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;
    std::map<std::string, std::string> named; // subcommand options given on the line
    unsigned threads = 0;
    bool cold = false;
};

// Merges file, --set pairs and named options, in that order of precedence.
RunConfig resolve(const Common& c) {
    RunConfig cfg = c.config_path.empty() ? RunConfig{} : RunConfig::parse_file(c.config_path);
    for (const auto& s : c.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error(ErrorKind::config, "--set expects key=value, got '" + s + "'");
        cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto& [k, v] : c.named)
        cfg.set(k, v);
    if (c.seed)
        cfg.set("seed", std::to_string(*c.seed));
    return cfg;
}

std::string out_path(const Common& c, const std::string& name) { return (fs::path(c.out_dir) / name).string(); }

void finish(const Common& c, RunConfig& cfg, const std::string& sub) {
    cfg.require_all_used();
    cfg.write_resolved(out_path(c, sub + ".config.txt"));
}

SpectrumCache make_cache(RunConfig& cfg) {
    const auto grid = SpectralGrid::parse(cfg.str("grid", SpectralGrid{}.to_string()));
    const auto cat_seed = static_cast<std::uint64_t>(cfg.integer("catalog_seed", 1));
    return SpectrumCache(make_catalog(cat_seed, grid), grid);
}

ThermoState read_state(RunConfig& cfg, const ThermoState& d = {1750.0, 0.075, 0.175, 0.025}) {
    ThermoState s;
    s.temperature = cfg.num("T", d.temperature);
    s.x_co2 = cfg.num("xco2", d.x_co2);
    s.x_h2o = cfg.num("xh2o", d.x_h2o);
    s.x_co = cfg.num("xco", d.x_co);
    return s;
}

QuadratureSet read_quad(RunConfig& cfg, std::size_t fallback = 8) {
    return gauss_chebyshev(static_cast<int>(cfg.count("nodes", fallback, 2)));
}

template <class T>
std::string fmt(T v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// --- subcommands -------------------------------------------------------------

void gen_spectrum(const Common& c) {
    auto cfg = resolve(c);
    auto cache = make_cache(cfg);
    const auto state = read_state(cfg);
    const auto field = cache.spectrum(state);
    save_spectrum_csv(field, out_path(c, "spectrum.csv"));
    finish(c, cfg, "gen-spectrum");
}

void build_kdist_cmd(const Common& c) {
    auto cfg = resolve(c);
    const std::string input = cfg.str("spectrum", "");
    const auto state = read_state(cfg);
    const double t0 = cfg.num("T0", 950.0);
    const auto quad = read_quad(cfg);
    SpectralField field;
    if (input.empty()) {
        auto cache = make_cache(cfg);
        field = cache.spectrum(state);
    } else {
        field = load_spectrum_csv(input, state);
    }
    write_kdist_csv(build_kdist(field, state.temperature), out_path(c, "kdist_T.csv"));
    write_kdist_csv(build_kdist(field, t0), out_path(c, "kdist_T0.csv"));
    write_stretch_csv(stretch_exact(field, state.temperature, t0, quad), out_path(c, "stretch.csv"));
    finish(c, cfg, "build-kdist");
}

void make_corpus(const Common& c) {
    auto cfg = resolve(c);
    auto cache = make_cache(cfg);
    const auto seed = static_cast<std::uint64_t>(cfg.integer("seed", 1));
    const auto n = cfg.count("states", 2000);
    const auto quad = read_quad(cfg);
    const auto samples = sample_states(n, seed);
    const auto rows = label_states(samples, quad, cache, c.threads);
    write_corpus(rows, out_path(c, "corpus.csv"));
    write_manifest(out_path(c, "corpus.manifest.txt"), seed, n, quad, cache.grid(),
                   static_cast<std::uint64_t>(cfg.integer("catalog_seed", 1)));
    finish(c, cfg, "make-corpus");
}

TrainConfig read_train_config(RunConfig& cfg) {
    TrainConfig t;
    t.learning_rate = cfg.num("learning_rate", t.learning_rate);
    t.l2_reg = cfg.num("l2_reg", t.l2_reg);
    t.batch_size = cfg.count("batch_size", t.batch_size);
    t.max_epochs = cfg.count("max_epochs", t.max_epochs);
    t.patience = cfg.count("patience", t.patience);
    t.lr_decay = cfg.num("lr_decay", t.lr_decay);
    t.max_decays = cfg.count("max_decays", t.max_decays);
    t.seed = static_cast<std::uint64_t>(cfg.integer("seed", 1));
    t.validate();
    return t;
}

MlpModel read_architecture(RunConfig& cfg) {
    std::vector<std::uint32_t> hidden;
    for (double h : cfg.list("hidden", {120, 120, 120})) {
        if (h < 1 || h != std::floor(h))
            throw Error(ErrorKind::config, "hidden layer sizes must be positive integers");
        hidden.push_back(static_cast<std::uint32_t>(h));
    }
    return make_sfm(hidden);
}

void train_cmd(const Common& c) {
    auto cfg = resolve(c);
    const auto rows = read_corpus(cfg.str("corpus", "corpus.csv"));
    const auto tc = read_train_config(cfg);
    const auto arch = read_architecture(cfg);
    const auto batch = to_batch(arch, rows);
    std::ofstream hist(out_path(c, "history.csv"));
    hist.precision(10);
    hist << "epoch,train_loss,val_metric\n";
    const auto res = train(arch, batch, tc, [&](std::size_t e, double loss, double vm) {
        hist << e << ',' << loss << ',' << vm << '\n';
    });
    save_model(res.model, out_path(c, "model.sfmw"));
    std::ofstream sum(out_path(c, "train_summary.txt"));
    sum.precision(10);
    sum << "rows = " << rows.size() << "\nparameters = " << res.model.parameter_count()
        << "\nbest_epoch = " << res.best_epoch << "\nbest_val_metric = " << res.best_metric
        << "\nepochs_run = " << res.val_metric.size() << '\n';
    finish(c, cfg, "train");
}

void tune_cmd(const Common& c) {
    auto cfg = resolve(c);
    const auto rows = read_corpus(cfg.str("corpus", "corpus.csv"));
    auto tc = read_train_config(cfg);
    tc.max_epochs = cfg.count("tune_epochs", 30);
    const auto arch = read_architecture(cfg);
    const auto batch = to_batch(arch, rows);
    TuneOptions opt;
    opt.budget = cfg.count("budget", 100);
    opt.seed = tc.seed;
    opt.random_search = cfg.flag("random_search", false);
    SearchSpace space;
    space.lr_min = cfg.num("lr_min", space.lr_min);
    space.lr_max = cfg.num("lr_max", space.lr_max);
    space.l2_min = cfg.num("l2_min", space.l2_min);
    space.l2_max = cfg.num("l2_max", space.l2_max);
    const auto res = tune(
        [&](double lr, double l2) {
            auto t = tc;
            t.learning_rate = lr;
            t.l2_reg = l2;
            return train(arch, batch, t).best_metric;
        },
        space, opt);
    std::ofstream trace(out_path(c, "tune_trace.csv"));
    trace.precision(10);
    trace << "sample,learning_rate,l2_reg,val_metric,best_so_far\n";
    for (std::size_t i = 0; i < res.trace.size(); ++i) {
        const auto& s = res.trace[i];
        trace << i << ',' << s.learning_rate << ',' << s.l2_reg << ',' << s.value << ',' << s.best_so_far << '\n';
    }
    std::ofstream best(out_path(c, "tune_best.txt"));
    best.precision(10);
    best << "learning_rate = " << res.learning_rate << "\nl2_reg = " << res.l2_reg << "\nval_metric = " << res.value
         << '\n';
    finish(c, cfg, "tune");
}

// Accepts a corpus file or six-column rows under the header
// T,T0,xco2,xh2o,xco,g.
std::vector<std::array<double, 8>> read_queries(const std::string& path, bool& has_labels) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::io, "cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorKind::format, path + ": empty input file");
    line = detail::trim(line);
    if (line == corpus_header) {
        has_labels = true;
        std::vector<std::array<double, 8>> out;
        for (const auto& r : read_corpus(path))
            out.push_back({r.t, r.t0, r.x_co2, r.x_h2o, r.x_co, r.g, r.k, r.ka});
        return out;
    }
    if (line != "T,T0,xco2,xh2o,xco,g")
        throw Error(ErrorKind::format, path + ":1: expected header T,T0,xco2,xh2o,xco,g or a corpus header");
    has_labels = false;
    std::vector<std::array<double, 8>> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty())
            continue;
        const auto cells = detail::split_csv(line);
        if (cells.size() != 6)
            throw Error(ErrorKind::parse, path + ":" + std::to_string(lineno) + ": expected 6 columns");
        std::array<double, 8> v{};
        for (std::size_t i = 0; i < 6; ++i)
            if (!detail::parse_double(cells[i], v[i]))
                throw Error(ErrorKind::parse, path + ":" + std::to_string(lineno) + ": bad number");
        out.push_back(v);
    }
    return out;
}

void infer_cmd(const Common& c) {
    auto cfg = resolve(c);
    const auto model = load_model(cfg.str("model", "model.sfmw"));
    bool labels = false;
    const auto q = read_queries(cfg.str("input", "corpus.csv"), labels);
    std::vector<double> in;
    for (const auto& r : q)
        in.insert(in.end(), r.begin(), r.begin() + 6);
    const auto out = forward_batch(model, in);
    std::ofstream f(out_path(c, "predictions.csv"));
    f.precision(17);
    f << "T,T0,xco2,xh2o,xco,g,k,ka\n";
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = 0; j < 6; ++j)
            f << q[i][j] << ',';
        f << out[2 * i] << ',' << out[2 * i + 1] << '\n';
    }
    if (labels) {
        std::vector<double> yt_k, yp_k, yt_ka, yp_ka;
        for (std::size_t i = 0; i < q.size(); ++i) {
            yt_k.push_back(encode_target(model, 0, q[i][6]));
            yp_k.push_back(encode_target(model, 0, out[2 * i]));
            yt_ka.push_back(encode_target(model, 1, q[i][7]));
            yp_ka.push_back(encode_target(model, 1, out[2 * i + 1]));
        }
        std::ofstream s(out_path(c, "infer_summary.txt"));
        s.precision(10);
        s << "rows = " << q.size() << "\nmetric_k = " << metric(yt_k, yp_k) << "\nmetric_ka = " << metric(yt_ka, yp_ka)
          << '\n';
    }
    finish(c, cfg, "infer");
}

TableAxes read_axes(RunConfig& cfg) {
    const auto d = TableAxes::desk_default();
    TableAxes a;
    const char* keys[table_dims] = {"table_T", "table_T0", "table_xco2", "table_xh2o", "table_xco"};
    for (std::size_t i = 0; i < table_dims; ++i)
        a.axis[i] = cfg.list(keys[i], d.axis[i]);
    a.validate();
    a.require_in_envelope();
    return a;
}

void table_build(const Common& c) {
    auto cfg = resolve(c);
    auto cache = make_cache(cfg);
    const auto axes = read_axes(cfg);
    const auto quad = read_quad(cfg);
    save_table(build_table(axes, quad, cache, c.threads), out_path(c, "table.fskt"));
    finish(c, cfg, "table-build");
}

std::vector<std::string> split_names(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        const auto item = detail::trim(s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (!item.empty())
            out.push_back(item);
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

void slab_cmd(const Common& c) {
    auto cfg = resolve(c);
    auto cache = make_cache(cfg);
    const auto models = split_names(cfg.str("models", "exact,sfm,table"));
    if (models.empty())
        throw Error(ErrorKind::config, "models list is empty");
    const std::string profile = cfg.str("profile", "uniform");
    const auto cells = cfg.count("cells", 40, 2);
    const double length = cfg.num("length", 1.0);
    SlabProblem p;
    if (profile == "uniform") {
        p = uniform_slab(read_state(cfg), cfg.num("T0", 950.0), length, cells);
    } else if (profile == "random") {
        p = random_profile(static_cast<std::uint64_t>(cfg.integer("seed", 1)), cells, length);
    } else {
        throw Error(ErrorKind::config, "profile must be uniform or random");
    }
    p.wall_temperature_0 = cfg.num("wall_T0", 0.0);
    p.wall_temperature_l = cfg.num("wall_TL", 0.0);
    const std::string solver = cfg.str("solver", "exact");
    if (solver != "exact" && solver != "p1")
        throw Error(ErrorKind::config, "solver must be exact or p1");
    const auto quad = read_quad(cfg);

    std::optional<MlpModel> model;
    std::optional<FsckTable> table;
    std::vector<RteSolution> sols;
    auto solve = [&](const SpectralSource& s) {
        return solver == "p1" ? solve_slab_p1(p, s) : solve_slab_exact(p, s);
    };
    for (const auto& m : models) {
        if (m == "exact") {
            sols.push_back(solve(exact_source(p, quad, cache, c.threads)));
        } else if (m == "discrete") {
            sols.push_back(solve(discrete_source(p, quad, cache, c.threads)));
        } else if (m == "gray") {
            sols.push_back(solve(gray_source(p, quad, cache, c.threads)));
        } else if (m == "sfm") {
            if (!model)
                model = load_model(cfg.str("model", "model.sfmw"));
            sols.push_back(solve(sfm_source(p, quad, *model)));
        } else if (m == "table") {
            if (!table)
                table = load_table(cfg.str("table", "table.fskt"));
            if (table->quad.nodes != quad.nodes)
                throw Error(ErrorKind::config, "table quadrature differs from nodes = " + std::to_string(quad.size()));
            sols.push_back(solve(table_source(p, *table)));
        } else if (m == "lbl") {
            const auto fields = cell_spectra(p, cache);
            sols.push_back(solve_slab_lbl(p, fields, c.threads));
        } else {
            throw Error(ErrorKind::config, "unknown model '" + m + "'");
        }
    }
    const auto report = compare_solutions(std::move(sols));
    write_report_csv(report, out_path(c, "slab.csv"));
    write_report_summary(report, out_path(c, "slab_summary.txt"));
    finish(c, cfg, "slab");
}

void planck_mean_cmd(const Common& c) {
    auto cfg = resolve(c);
    auto cache = make_cache(cfg);
    const auto state = read_state(cfg);
    const double t0 = cfg.num("T0", state.temperature);
    const auto quad = read_quad(cfg);
    const std::string model_path = cfg.str("model", "");
    const auto field = cache.spectrum(state);
    const double lbl = planck_mean_lbl(field, state.temperature);
    const auto prof = stretch_exact(field, state.temperature, t0, quad);
    std::ofstream out(out_path(c, "planck_mean.txt"));
    out.precision(10);
    out << "kp_lbl = " << lbl << "\nkp_fsck_exact = " << planck_mean_fsck(quad.weights, prof.ka)
        << "\nrel_err_fsck_exact = " << planck_mean_fsck(quad.weights, prof.ka) / lbl - 1.0 << '\n';
    if (!model_path.empty()) {
        const auto m = load_model(model_path);
        std::vector<double> ka;
        for (double g : quad.nodes)
            ka.push_back(forward(m, std::vector<double>{state.temperature, t0, state.x_co2, state.x_h2o, state.x_co, g})[1]);
        const double kp = planck_mean_fsck(quad.weights, ka);
        out << "kp_sfm = " << kp << "\nrel_err_sfm = " << kp / lbl - 1.0 << '\n';
    }
    finish(c, cfg, "planck-mean");
}

// Uniformly random continuous states in the training box.
std::vector<StateSample> bench_states(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> t(envelope::t_min, envelope::t_max), u(0.0, 1.0);
    std::vector<StateSample> out;
    while (out.size() < n) {
        StateSample s;
        s.state.temperature = t(rng);
        s.t0 = t(rng);
        s.state.x_co2 = u(rng);
        s.state.x_h2o = u(rng);
        s.state.x_co = 0.5 * u(rng);
        if (s.state.total_absorber() > 1.0)
            continue;
        out.push_back(s);
    }
    return out;
}

void bench_cmd(const Common& c) {
    auto cfg = resolve(c);
    const auto n = cfg.count("states", 10000);
    const auto n_exact = cfg.count("exact_states", 10);
    const auto seed = static_cast<std::uint64_t>(cfg.integer("seed", 1));
    const std::string model_path = cfg.str("model", "model.sfmw");
    const std::string table_path = cfg.str("table", "table.fskt");
    using clock = std::chrono::steady_clock;
    auto seconds = [](clock::time_point a) { return std::chrono::duration<double>(clock::now() - a).count(); };

    // table bounds are narrower than the network box; keep queries inside both
    auto t_load = clock::now();
    const auto model = load_model(model_path);
    const auto table = load_table(table_path);
    const double load_s = seconds(t_load);
    auto states = bench_states(n, seed);
    for (auto& s : states) {
        auto clampx = [&](double v, std::size_t d) { return std::clamp(v, table.axes.axis[d].front(), table.axes.axis[d].back()); };
        s.state.temperature = clampx(s.state.temperature, 0);
        s.t0 = clampx(s.t0, 1);
        s.state.x_co2 = clampx(s.state.x_co2, 2);
        s.state.x_h2o = clampx(s.state.x_h2o, 3);
        s.state.x_co = clampx(s.state.x_co, 4);
    }
    const auto& quad = table.quad;
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
    auto run_sfm = [&] {
        const auto out = forward_batch(model, in);
        sink += out[0];
    };
    run_table(); // warm-up passes
    run_sfm();
    auto t1 = clock::now();
    run_table();
    const double table_s = seconds(t1);
    t1 = clock::now();
    run_sfm();
    const double sfm_s = seconds(t1);

    auto cache = make_cache(cfg);
    const std::vector<StateSample> sub(states.begin(), states.begin() + static_cast<std::ptrdiff_t>(std::min(n_exact, n)));
    // continuous temperatures never hit the cache, so line synthesis is part of the exact cost
    t1 = clock::now();
    for (const auto& s : sub)
        sink += kdist_at_state(s.state, s.t0, quad, cache)[0].ka;
    const double exact_s = seconds(t1);

    const double cold = c.cold ? load_s : 0.0;
    std::ofstream out(out_path(c, "bench.csv"));
    out.precision(6);
    out << "phase,states,seconds,us_per_state\n";
    out << "table," << n << ',' << table_s + cold << ',' << 1e6 * (table_s + cold) / static_cast<double>(n) << '\n';
    out << "sfm," << n << ',' << sfm_s + cold << ',' << 1e6 * (sfm_s + cold) / static_cast<double>(n) << '\n';
    out << "exact," << sub.size() << ',' << exact_s << ',' << 1e6 * exact_s / static_cast<double>(sub.size()) << '\n';
    std::cout << "table " << table_s << " s, sfm " << sfm_s << " s for " << n << " states; exact "
              << exact_s / static_cast<double>(sub.size()) * static_cast<double>(n) << " s extrapolated"
              << (c.cold ? " (load included)" : "") << "\n";
    if (!std::isfinite(sink))
        throw Error(ErrorKind::numeric, "benchmark produced non-finite values");
    finish(c, cfg, "bench");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Full-spectrum k-distribution toolkit"};
    app.require_subcommand(1);
    Common common;

    struct Sub {
        const char* name;
        const char* help;
        void (*run)(const Common&);
        std::vector<std::string> keys; // named options mapped onto config keys
    };
    const std::vector<Sub> subs = {
        {"gen-spectrum", "synthesize the absorption spectrum of one state", gen_spectrum,
         {"T", "xco2", "xh2o", "xco", "grid", "catalog_seed"}},
        {"build-kdist", "k-distributions and stretch profile of one state", build_kdist_cmd,
         {"T", "T0", "xco2", "xh2o", "xco", "nodes", "spectrum", "grid", "catalog_seed"}},
        {"make-corpus", "sample and label training states", make_corpus, {"states", "nodes", "grid", "catalog_seed"}},
        {"train", "train the network on a corpus", train_cmd,
         {"corpus", "learning_rate", "l2_reg", "batch_size", "max_epochs", "patience", "lr_decay", "max_decays", "hidden"}},
        {"tune", "search learning rate and L2 factor", tune_cmd,
         {"corpus", "budget", "tune_epochs", "random_search", "batch_size", "patience", "lr_decay", "max_decays", "hidden"}},
        {"infer", "evaluate a model on input rows", infer_cmd, {"model", "input"}},
        {"table-build", "build the lookup table", table_build,
         {"nodes", "table_T", "table_T0", "table_xco2", "table_xh2o", "table_xco", "grid", "catalog_seed"}},
        {"slab", "solve a 1-D slab with several spectral models", slab_cmd,
         {"models", "profile", "cells", "length", "T", "T0", "xco2", "xh2o", "xco", "nodes", "solver", "model",
          "table", "wall_T0", "wall_TL", "grid", "catalog_seed"}},
        {"planck-mean", "Planck-mean absorption coefficient by each route", planck_mean_cmd,
         {"T", "T0", "xco2", "xh2o", "xco", "nodes", "model", "grid", "catalog_seed"}},
        {"bench", "time table, network and exact evaluation", bench_cmd,
         {"states", "exact_states", "model", "table", "grid", "catalog_seed"}},
    };

    std::map<std::string, std::string> given;
    std::vector<std::pair<CLI::App*, const Sub*>> apps;
    for (const auto& s : subs) {
        auto* sc = app.add_subcommand(s.name, s.help);
        sc->add_option("--config", common.config_path, "key = value config file");
        sc->add_option("--out-dir", common.out_dir, "output directory")->capture_default_str();
        sc->add_option("--seed", common.seed, "random seed");
        sc->add_option("--set", common.sets, "override: key=value (repeatable)");
        sc->add_option("--threads", common.threads, "worker threads (0 = all cores)");
        if (std::string(s.name) == "bench")
            sc->add_flag("--cold", common.cold, "include model and table load in the timings");
        for (const auto& k : s.keys)
            sc->add_option_function<std::string>("--" + k, [&given, k](const std::string& v) { given[k] = v; },
                                                  "sets config key " + k);
        apps.emplace_back(sc, &s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : config_error;
    }

    try {
        common.named = given;
        fs::create_directories(common.out_dir);
        for (auto& [sc, s] : apps)
            if (sc->parsed())
                s->run(common);
        return ok;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return numeric_error;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return data_error;
    }
}
