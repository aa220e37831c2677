#pragma once

#include <cstdint>
#include <variant>

#include "mecauth/bytes.hpp"
#include "mecauth/curve.hpp"

namespace mecauth {

// Timestamps are 64-bit seconds internally, 32-bit big-endian on the wire.
using Timestamp = uint64_t;

struct M1 {
    Digest32 token;       // TK = sid32 XOR pad32(T) XOR mask32(R1ms)
    Timestamp user_time;  // T_u
    CurvePoint challenge; // R_1 = r1*G
};

struct M2 {
    Timestamp server_time;  // T_ms
    Digest32 server_auth;   // Auth_ms
};

struct M3 {
    Digest32 user_auth;  // Auth_u
};

using Message = std::variant<M1, M2, M3>;

}  // namespace mecauth
