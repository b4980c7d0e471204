#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace sdiwit {

// FNV-1a, 64-bit; used to fingerprint emitted artifacts in run manifests
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex16(std::uint64_t v) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = kDigits[v & 0xf];
        v >>= 4;
    }
    return out;
}

}  // namespace sdiwit
