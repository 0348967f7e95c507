#pragma once

#include <stdexcept>
#include <string>

namespace fsck {

/// Failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
    domain,      // argument outside the mathematical domain
    range,       // state outside the training envelope / table box
    parse,       // malformed text input
    validation,  // well-formed input violating an invariant
    degenerate,  // all-zero spectrum, constant metric target
    numeric,     // non-finite intermediate values
    format,      // binary file magic/version/shape/truncation
    io,
    config,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Reasons a binary file is rejected.
enum class FileFault { bad_magic, bad_version, truncated, shape };

class FormatError : public Error {
public:
    FormatError(FileFault fault, const std::string& what) : Error(ErrorKind::format, what), fault_(fault) {}

    FileFault fault() const noexcept { return fault_; }

private:
    FileFault fault_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::range: return "range";
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::format: return "format";
    case ErrorKind::io: return "io";
    case ErrorKind::config: return "config";
    }
    return "unknown";
}

} // namespace fsck
