#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fsck/binio.hpp"
#include "fsck/error.hpp"

namespace fsck {

enum class Activation : std::uint8_t { identity = 0, relu = 1 };
enum class OutputTransform : std::uint8_t { identity = 0, log10_floor = 1 };

/// Dense layer; weights are row-major out x in.
struct Layer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> w;
    std::vector<double> b;
    Activation act = Activation::relu;

    friend bool operator==(const Layer&, const Layer&) = default;
};

/// Feed-forward network with min-max input scaling and per-output decoding.
struct MlpModel {
    std::vector<std::uint32_t> sizes;
    std::vector<Layer> layers;
    std::vector<double> in_min, in_max;
    std::vector<OutputTransform> out_transform;
    std::vector<double> out_floor;

    std::size_t inputs() const { return sizes.front(); }
    std::size_t outputs() const { return sizes.back(); }

    std::size_t weight_count() const {
        std::size_t n = 0;
        for (const auto& l : layers)
            n += l.w.size();
        return n;
    }
    std::size_t bias_count() const {
        std::size_t n = 0;
        for (const auto& l : layers)
            n += l.b.size();
        return n;
    }
    std::size_t parameter_count() const { return weight_count() + bias_count(); }

    std::size_t widest() const {
        std::size_t m = 0;
        for (auto s : sizes)
            m = std::max<std::size_t>(m, s);
        return m;
    }

    void validate() const {
        if (sizes.size() < 2)
            throw Error(ErrorKind::validation, "model needs at least an input and an output layer");
        if (layers.size() + 1 != sizes.size())
            throw Error(ErrorKind::validation, "layer count does not match layer sizes");
        for (std::size_t l = 0; l < layers.size(); ++l) {
            const auto& L = layers[l];
            if (sizes[l] == 0 || L.in != sizes[l] || L.out != sizes[l + 1] || L.w.size() != L.in * L.out ||
                L.b.size() != L.out)
                throw Error(ErrorKind::validation, "weight shapes inconsistent at layer " + std::to_string(l));
            for (double v : L.w)
                if (!std::isfinite(v))
                    throw Error(ErrorKind::validation, "non-finite weight at layer " + std::to_string(l));
            for (double v : L.b)
                if (!std::isfinite(v))
                    throw Error(ErrorKind::validation, "non-finite bias at layer " + std::to_string(l));
        }
        if (in_min.size() != inputs() || in_max.size() != inputs())
            throw Error(ErrorKind::validation, "input normalization size mismatch");
        for (std::size_t i = 0; i < inputs(); ++i)
            if (!(in_max[i] > in_min[i]) || !std::isfinite(in_min[i]) || !std::isfinite(in_max[i]))
                throw Error(ErrorKind::validation, "input box must satisfy min < max");
        if (out_transform.size() != outputs() || out_floor.size() != outputs())
            throw Error(ErrorKind::validation, "output transform size mismatch");
        for (std::size_t o = 0; o < outputs(); ++o)
            if (out_transform[o] == OutputTransform::log10_floor && !(out_floor[o] > 0.0))
                throw Error(ErrorKind::validation, "log10 output floor must be positive");
    }

    /// Zero-initialized model: ReLU hidden layers, identity output layer.
    static MlpModel create(std::vector<std::uint32_t> sizes, std::vector<double> in_min,
                           std::vector<double> in_max, std::vector<OutputTransform> transform,
                           std::vector<double> floor) {
        MlpModel m;
        m.sizes = std::move(sizes);
        for (std::size_t l = 0; l + 1 < m.sizes.size(); ++l) {
            Layer L;
            L.in = m.sizes[l];
            L.out = m.sizes[l + 1];
            L.w.assign(L.in * L.out, 0.0);
            L.b.assign(L.out, 0.0);
            L.act = l + 2 == m.sizes.size() ? Activation::identity : Activation::relu;
            m.layers.push_back(std::move(L));
        }
        m.in_min = std::move(in_min);
        m.in_max = std::move(in_max);
        m.out_transform = std::move(transform);
        m.out_floor = std::move(floor);
        m.validate();
        return m;
    }

    friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

/// Input order of the surrogate: T, T0 (K), x_co2, x_h2o, x_co, g.
inline constexpr std::size_t sfm_inputs = 6;
inline constexpr double target_floor = 1e-30;

/// [6, hidden..., 2] with the envelope as input box and log10 outputs.
inline MlpModel make_sfm(const std::vector<std::uint32_t>& hidden = {120, 120, 120}) {
    std::vector<std::uint32_t> sizes{static_cast<std::uint32_t>(sfm_inputs)};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(2);
    return MlpModel::create(sizes, {300.0, 300.0, 0.0, 0.0, 0.0, 0.0}, {3000.0, 3000.0, 1.0, 1.0, 0.5, 1.0},
                            {OutputTransform::log10_floor, OutputTransform::log10_floor},
                            {target_floor, target_floor});
}

inline double encode_target(const MlpModel& m, std::size_t o, double v) {
    if (m.out_transform[o] == OutputTransform::log10_floor)
        return std::log10(std::max(v, m.out_floor[o]));
    return v;
}

inline double decode_output(const MlpModel& m, std::size_t o, double y) {
    if (m.out_transform[o] == OutputTransform::log10_floor)
        return std::pow(10.0, y);
    return y;
}

/// Normalizes one input vector into [0,1]; rejects anything outside the box.
inline void normalize_inputs(const MlpModel& m, const double* in, double* out) {
    for (std::size_t i = 0; i < m.inputs(); ++i) {
        const double v = in[i];
        if (!std::isfinite(v))
            throw Error(ErrorKind::numeric, "non-finite model input " + std::to_string(i));
        if (v < m.in_min[i] || v > m.in_max[i])
            throw Error(ErrorKind::range, "model input " + std::to_string(i) + " = " + std::to_string(v) +
                                              " outside its normalization box");
        out[i] = (v - m.in_min[i]) / (m.in_max[i] - m.in_min[i]);
    }
}

namespace detail {

// The single per-row kernel shared by forward and forward_batch. scratch
// holds 2 * widest doubles. Writes raw (transformed-space) outputs.
inline void forward_raw(const MlpModel& m, const double* in, double* raw, double* scratch) {
    const std::size_t wide = m.widest();
    double* cur = scratch;
    double* next = scratch + wide;
    normalize_inputs(m, in, cur);
    for (const auto& L : m.layers) {
        const double* w = L.w.data();
        for (std::size_t o = 0; o < L.out; ++o) {
            double z = L.b[o];
            const double* row = w + o * L.in;
            for (std::size_t i = 0; i < L.in; ++i)
                z += row[i] * cur[i];
            next[o] = (L.act == Activation::relu && !(z > 0.0)) ? 0.0 : z;
        }
        std::swap(cur, next);
    }
    for (std::size_t o = 0; o < m.outputs(); ++o)
        raw[o] = cur[o];
}

inline void forward_row(const MlpModel& m, const double* in, double* out, double* scratch) {
    forward_raw(m, in, out, scratch);
    for (std::size_t o = 0; o < m.outputs(); ++o) {
        out[o] = decode_output(m, o, out[o]);
        if (!std::isfinite(out[o]))
            throw Error(ErrorKind::numeric, "non-finite model output " + std::to_string(o));
    }
}

} // namespace detail

/// One evaluation, decoded to physical outputs.
inline std::vector<double> forward(const MlpModel& m, std::span<const double> input) {
    if (input.size() != m.inputs())
        throw Error(ErrorKind::validation, "forward: expected " + std::to_string(m.inputs()) + " inputs");
    std::vector<double> scratch(2 * m.widest());
    std::vector<double> out(m.outputs());
    detail::forward_row(m, input.data(), out.data(), scratch.data());
    return out;
}

/// Row-major n x inputs in, n x outputs out; same kernel as forward.
inline std::vector<double> forward_batch(const MlpModel& m, std::span<const double> inputs) {
    if (inputs.size() % m.inputs() != 0)
        throw Error(ErrorKind::validation, "forward_batch: input length is not a multiple of the input width");
    const std::size_t n = inputs.size() / m.inputs();
    std::vector<double> scratch(2 * m.widest());
    std::vector<double> out(n * m.outputs());
    for (std::size_t r = 0; r < n; ++r)
        detail::forward_row(m, inputs.data() + r * m.inputs(), out.data() + r * m.outputs(), scratch.data());
    return out;
}

/// Sum of squared residuals over the spread of y_true about its mean.
inline double metric(std::span<const double> y_true, std::span<const double> y_pred) {
    if (y_true.size() != y_pred.size())
        throw Error(ErrorKind::validation, "metric: length mismatch");
    if (y_true.size() < 2)
        throw Error(ErrorKind::degenerate, "metric needs at least two samples");
    double mean = 0.0;
    for (double v : y_true)
        mean += v;
    mean /= static_cast<double>(y_true.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        num += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
        den += (y_true[i] - mean) * (y_true[i] - mean);
    }
    if (!(den > 0.0))
        throw Error(ErrorKind::degenerate, "metric undefined for constant targets");
    return num / den;
}

// --- weight file -----------------------------------------------------------

inline constexpr std::uint32_t model_version = 1;

inline std::vector<unsigned char> serialize_model(const MlpModel& m) {
    m.validate();
    binio::Writer w;
    w.bytes("SFMW", 4);
    w.u32(model_version);
    w.u32(static_cast<std::uint32_t>(m.sizes.size()));
    for (auto s : m.sizes)
        w.u32(s);
    for (const auto& L : m.layers)
        w.u8(static_cast<std::uint8_t>(L.act));
    for (std::size_t i = 0; i < m.inputs(); ++i) {
        w.f64(m.in_min[i]);
        w.f64(m.in_max[i]);
    }
    for (std::size_t o = 0; o < m.outputs(); ++o) {
        w.u8(static_cast<std::uint8_t>(m.out_transform[o]));
        w.f64(m.out_floor[o]);
    }
    for (const auto& L : m.layers) {
        for (double v : L.w)
            w.f64(v);
        for (double v : L.b)
            w.f64(v);
    }
    return w.data();
}

inline void save_model(const MlpModel& m, const std::string& path) {
    binio::Writer w;
    const auto bytes = serialize_model(m);
    w.bytes(bytes.data(), bytes.size());
    w.save(path);
}

inline MlpModel parse_model(binio::Reader& r) {
    const std::string& path = r.name();
    char magic[4];
    r.bytes(magic, 4);
    if (std::string(magic, 4) != "SFMW")
        throw FormatError(FileFault::bad_magic, path + ": bad magic, not a model file");
    if (r.u32() != model_version)
        throw FormatError(FileFault::bad_version, path + ": unsupported model version");
    const std::uint32_t count = r.u32();
    if (count < 2 || count > 64)
        throw FormatError(FileFault::shape, path + ": implausible layer count");
    MlpModel m;
    m.sizes.resize(count);
    for (auto& s : m.sizes) {
        s = r.u32();
        if (s == 0 || s > (1u << 20))
            throw FormatError(FileFault::shape, path + ": implausible layer size");
    }
    m.layers.resize(count - 1);
    for (std::size_t l = 0; l + 1 < count; ++l) {
        const auto code = r.u8();
        if (code > 1)
            throw FormatError(FileFault::shape, path + ": unknown activation code");
        m.layers[l].act = static_cast<Activation>(code);
        m.layers[l].in = m.sizes[l];
        m.layers[l].out = m.sizes[l + 1];
    }
    m.in_min.resize(m.sizes.front());
    m.in_max.resize(m.sizes.front());
    for (std::size_t i = 0; i < m.inputs(); ++i) {
        m.in_min[i] = r.f64();
        m.in_max[i] = r.f64();
    }
    m.out_transform.resize(m.outputs());
    m.out_floor.resize(m.outputs());
    for (std::size_t o = 0; o < m.outputs(); ++o) {
        const auto code = r.u8();
        if (code > 1)
            throw FormatError(FileFault::shape, path + ": unknown output transform code");
        m.out_transform[o] = static_cast<OutputTransform>(code);
        m.out_floor[o] = r.f64();
    }
    for (auto& L : m.layers) {
        if (L.in * L.out + L.out > r.remaining() / 8)
            throw FormatError(FileFault::truncated, path + ": truncated file");
        L.w.resize(L.in * L.out);
        L.b.resize(L.out);
        for (auto& v : L.w)
            v = r.f64();
        for (auto& v : L.b)
            v = r.f64();
    }
    if (r.remaining() != 0)
        throw FormatError(FileFault::shape, path + ": trailing bytes after the last layer");
    try {
        m.validate();
    } catch (const Error& e) {
        throw FormatError(FileFault::shape, path + ": " + e.what());
    }
    return m;
}

inline MlpModel load_model(const std::string& path) {
    auto r = binio::Reader::open(path);
    return parse_model(r);
}

} // namespace fsck
