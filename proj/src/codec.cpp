#include "mecauth/codec.hpp"

namespace mecauth {

namespace {

void put_u16(Bytes& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

void put_u32(Bytes& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

uint32_t get_u32(std::span<const uint8_t> in) {
    return static_cast<uint32_t>(in[0]) << 24 | static_cast<uint32_t>(in[1]) << 16 |
           static_cast<uint32_t>(in[2]) << 8 | static_cast<uint32_t>(in[3]);
}

Digest32 get_d32(std::span<const uint8_t> in) {
    Digest32 out;
    std::copy(in.begin(), in.begin() + 32, out.begin());
    return out;
}

}  // namespace

size_t m1_payload_size(const CurveParams& curve) {
    return 32 + 4 + curve.point_width();
}

Bytes encode_message(const CurveParams& curve, const Message& msg) {
    Bytes payload;
    uint8_t type = 0;
    if (const M1* m1 = std::get_if<M1>(&msg)) {
        type = kFrameM1;
        append(payload, m1->token);
        put_u32(payload, static_cast<uint32_t>(m1->user_time));
        Bytes pt = curve.encode_point(m1->challenge);
        if (pt.size() != curve.point_width())
            throw std::invalid_argument("M1 challenge must be a non-identity point");
        append(payload, pt);
    } else if (const M2* m2 = std::get_if<M2>(&msg)) {
        type = kFrameM2;
        put_u32(payload, static_cast<uint32_t>(m2->server_time));
        append(payload, m2->server_auth);
    } else {
        type = kFrameM3;
        append(payload, std::get<M3>(msg).user_auth);
    }
    Bytes frame;
    frame.reserve(kFrameHeader + payload.size());
    frame.push_back(type);
    put_u16(frame, static_cast<uint16_t>(payload.size()));
    append(frame, payload);
    return frame;
}

Message decode_message(const CurveParams& curve, std::span<const uint8_t> frame) {
    if (frame.size() < kFrameHeader)
        throw ProtocolError(ErrorKind::TruncatedFrame, "frame shorter than header");
    uint8_t type = frame[0];
    size_t length = static_cast<size_t>(frame[1]) << 8 | frame[2];
    auto payload = frame.subspan(kFrameHeader);
    if (payload.size() < length)
        throw ProtocolError(ErrorKind::TruncatedFrame, "payload shorter than length field");
    if (payload.size() > length)
        throw ProtocolError(ErrorKind::LengthMismatch, "trailing bytes after payload");

    switch (type) {
        case kFrameM1: {
            if (length != m1_payload_size(curve))
                throw ProtocolError(ErrorKind::LengthMismatch, "bad M1 payload length");
            M1 m1;
            m1.token = get_d32(payload.first(32));
            m1.user_time = get_u32(payload.subspan(32, 4));
            try {
                m1.challenge = curve.decode_point(payload.subspan(36));
            } catch (const MalformedPointError& e) {
                throw ProtocolError(ErrorKind::MalformedPoint, e.what());
            }
            if (m1.challenge.infinity)
                throw ProtocolError(ErrorKind::MalformedPoint, "identity challenge point");
            return m1;
        }
        case kFrameM2: {
            if (length != kM2PayloadSize)
                throw ProtocolError(ErrorKind::LengthMismatch, "bad M2 payload length");
            return M2{get_u32(payload.first(4)), get_d32(payload.subspan(4))};
        }
        case kFrameM3: {
            if (length != kM3PayloadSize)
                throw ProtocolError(ErrorKind::LengthMismatch, "bad M3 payload length");
            return M3{get_d32(payload)};
        }
        default:
            throw ProtocolError(ErrorKind::UnknownType, "unknown frame type");
    }
}

}  // namespace mecauth
