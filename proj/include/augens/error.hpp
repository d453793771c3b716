#pragma once

#include <stdexcept>
#include <string>

namespace augens {

enum class ErrorCode {
    invalid_argument,
    channel_count,
    dimension_mismatch,
    color_only,
    companion_count,
    unsupported,
    insufficient_pool,
    io,
    parse,
};

const char* to_string(ErrorCode code) noexcept;

/// Every library failure is reported through this type; `code()` lets callers
/// branch without parsing the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid argument";
        case ErrorCode::channel_count: return "channel count";
        case ErrorCode::dimension_mismatch: return "dimension mismatch";
        case ErrorCode::color_only: return "color-only";
        case ErrorCode::companion_count: return "companion count";
        case ErrorCode::unsupported: return "unsupported";
        case ErrorCode::insufficient_pool: return "insufficient pool";
        case ErrorCode::io: return "io";
        case ErrorCode::parse: return "parse";
    }
    return "error";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
    if (!condition) fail(code, message);
}

}  // namespace augens
