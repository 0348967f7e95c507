#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "fsck/error.hpp"

namespace fsck::binio {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::little)
        return v;
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
        std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
}

/// Little-endian append-only byte buffer.
class Writer {
public:
    void bytes(const void* p, std::size_t n) {
        const auto* c = static_cast<const unsigned char*>(p);
        buf_.insert(buf_.end(), c, c + n);
    }
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u32(std::uint32_t v) {
        v = to_little(v);
        bytes(&v, sizeof v);
    }
    void f64(double v) {
        auto u = to_little(std::bit_cast<std::uint64_t>(v));
        bytes(&u, sizeof u);
    }
    const std::vector<unsigned char>& data() const { return buf_; }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw Error(ErrorKind::io, "cannot open " + path + " for writing");
        out.write(reinterpret_cast<const char*>(buf_.data()), static_cast<std::streamsize>(buf_.size()));
        if (!out)
            throw Error(ErrorKind::io, "write failed for " + path);
    }

private:
    std::vector<unsigned char> buf_;
};

/// Bounds-checked little-endian reader; running past the end is a format error.
class Reader {
public:
    explicit Reader(std::vector<unsigned char> data, std::string name)
        : buf_(std::move(data)), name_(std::move(name)) {}

    static Reader open(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw Error(ErrorKind::io, "cannot open " + path);
        std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return Reader(std::move(data), path);
    }

    void bytes(void* p, std::size_t n) {
        if (n > buf_.size() - pos_)
            throw FormatError(FileFault::truncated, name_ + ": truncated file");
        std::memcpy(p, buf_.data() + pos_, n);
        pos_ += n;
    }
    std::uint8_t u8() {
        std::uint8_t v;
        bytes(&v, 1);
        return v;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        bytes(&v, sizeof v);
        return to_little(v);
    }
    double f64() {
        std::uint64_t u;
        bytes(&u, sizeof u);
        return std::bit_cast<double>(to_little(u));
    }
    std::size_t remaining() const { return buf_.size() - pos_; }
    const std::string& name() const { return name_; }

private:
    std::vector<unsigned char> buf_;
    std::size_t pos_ = 0;
    std::string name_;
};

} // namespace fsck::binio
