#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mecauth {

using Bytes = std::vector<uint8_t>;
using Digest32 = std::array<uint8_t, 32>;

inline std::string to_hex(std::span<const uint8_t> data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

inline Bytes from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0)
        throw std::invalid_argument("odd-length hex string");
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("invalid hex digit");
    };
    Bytes out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<uint8_t>(nib(hex[2 * i]) << 4 | nib(hex[2 * i + 1]));
    return out;
}

inline void append(Bytes& dst, std::span<const uint8_t> src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

inline Digest32 xor32(const Digest32& a, const Digest32& b) {
    Digest32 out;
    for (size_t i = 0; i < 32; ++i) out[i] = a[i] ^ b[i];
    return out;
}

// 32-byte big-endian encoding of a seconds value; uniform-width XOR operand.
inline Digest32 pad32(uint64_t seconds) {
    Digest32 out{};
    for (int i = 0; i < 8; ++i)
        out[31 - i] = static_cast<uint8_t>(seconds >> (8 * i));
    return out;
}

}  // namespace mecauth
