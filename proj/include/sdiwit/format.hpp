#pragma once

#include <charconv>
#include <cstdint>
#include <string>

// Round-trip numeric formatting: the shortest decimal form that parses back
// to the identical value.

namespace sdiwit {

inline std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

inline std::string format_u64(std::uint64_t v) {
    char buf[24];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

}  // namespace sdiwit
