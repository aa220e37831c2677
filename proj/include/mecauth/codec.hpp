#pragma once

#include "mecauth/errors.hpp"
#include "mecauth/messages.hpp"

namespace mecauth {

// Frame: 1 type byte (0x01=M1, 0x02=M2, 0x03=M3), 2-byte big-endian payload
// length, payload. Timestamps travel as 4-byte big-endian seconds.
inline constexpr uint8_t kFrameM1 = 0x01;
inline constexpr uint8_t kFrameM2 = 0x02;
inline constexpr uint8_t kFrameM3 = 0x03;
inline constexpr size_t kFrameHeader = 3;

size_t m1_payload_size(const CurveParams& curve);  // 32 + 4 + point
inline constexpr size_t kM2PayloadSize = 36;       // 4 + 32
inline constexpr size_t kM3PayloadSize = 32;

Bytes encode_message(const CurveParams& curve, const Message& msg);
Message decode_message(const CurveParams& curve, std::span<const uint8_t> frame);

}  // namespace mecauth
