#include <doctest.h>

#include "mecauth/codec.hpp"
#include "mecauth/rng.hpp"

using namespace mecauth;

namespace {

uint32_t rng_u32(SeededRng& rng) {
    uint8_t b[4];
    rng.fill(b);
    return static_cast<uint32_t>(b[0]) << 24 | b[1] << 16 | b[2] << 8 | b[3];
}

M1 sample_m1(const CurveParams& curve, SeededRng& rng) {
    M1 m1;
    rng.fill(m1.token);
    m1.user_time = 1700000000 + (rng_u32(rng) % 1000000);
    m1.challenge = curve.mul(random_scalar(curve, rng), curve.generator());
    return m1;
}

}  // namespace

TEST_CASE("fixed layouts") {
    const CurveParams& curve = CurveParams::secp256r1();
    SUBCASE("M3 with zero auth") {
        Bytes frame = encode_message(curve, M3{Digest32{}});
        REQUIRE(frame.size() == 35);
        CHECK(frame[0] == 0x03);
        CHECK(frame[1] == 0x00);
        CHECK(frame[2] == 0x20);
        for (size_t i = 3; i < frame.size(); ++i) CHECK(frame[i] == 0);
    }
    SUBCASE("M2 length field is 36") {
        Bytes frame = encode_message(curve, M2{1700000000, Digest32{}});
        CHECK(frame[0] == 0x02);
        CHECK((frame[1] << 8 | frame[2]) == 36);
        CHECK(frame.size() == 3 + 36);
    }
    SUBCASE("M1 payload is 69 bytes on the 256-bit curve") {
        SeededRng rng(1);
        Bytes frame = encode_message(curve, Message{sample_m1(curve, rng)});
        CHECK(frame.size() == 3 + 69);
        CHECK(m1_payload_size(curve) == 69);
    }
}

TEST_CASE("round-trip identity on random valid messages") {
    SeededRng rng(2);
    for (const CurveParams* curve :
         {&CurveParams::secp256r1(), &CurveParams::toy17()}) {
        for (int i = 0; i < 1000; ++i) {
            Message msg;
            switch (i % 3) {
                case 0: msg = sample_m1(*curve, rng); break;
                case 1: {
                    M2 m2;
                    m2.server_time = rng_u32(rng);
                    rng.fill(m2.server_auth);
                    msg = m2;
                    break;
                }
                default: {
                    M3 m3;
                    rng.fill(m3.user_auth);
                    msg = m3;
                    break;
                }
            }
            Bytes frame = encode_message(*curve, msg);
            Message back = decode_message(*curve, frame);
            REQUIRE(back.index() == msg.index());
            if (const M1* a = std::get_if<M1>(&msg)) {
                const M1& b = std::get<M1>(back);
                CHECK(a->token == b.token);
                CHECK(a->user_time == b.user_time);
                CHECK(a->challenge == b.challenge);
            } else if (const M2* a = std::get_if<M2>(&msg)) {
                const M2& b = std::get<M2>(back);
                CHECK(a->server_time == b.server_time);
                CHECK(a->server_auth == b.server_auth);
            } else {
                CHECK(std::get<M3>(msg).user_auth == std::get<M3>(back).user_auth);
            }
        }
    }
}

TEST_CASE("error taxonomy is distinct and specific") {
    const CurveParams& curve = CurveParams::secp256r1();
    SeededRng rng(3);
    Bytes good = encode_message(curve, Message{sample_m1(curve, rng)});

    auto kind_of = [&](const Bytes& frame) {
        try {
            decode_message(curve, frame);
            return std::string("ok");
        } catch (const ProtocolError& e) {
            return std::string(error_name(e.kind()));
        }
    };

    SUBCASE("truncated header") { CHECK(kind_of({0x01, 0x00}) == "truncated-frame"); }
    SUBCASE("length larger than payload") {
        Bytes frame = good;
        frame[2] += 1;  // claims 70 payload bytes, carries 69
        CHECK(kind_of(frame) == "truncated-frame");
    }
    SUBCASE("trailing bytes") {
        Bytes frame = good;
        frame.push_back(0x00);
        CHECK(kind_of(frame) == "length-mismatch");
    }
    SUBCASE("unknown type") {
        Bytes frame = good;
        frame[0] = 0x7f;
        CHECK(kind_of(frame) == "unknown-type");
    }
    SUBCASE("off-curve x coordinate") {
        Bytes frame = good;
        // walk x until decode rejects it as not on the curve
        bool saw_malformed = false;
        for (int step = 1; step < 8 && !saw_malformed; ++step) {
            Bytes probe = good;
            probe[3 + 68] = static_cast<uint8_t>(probe[3 + 68] + step);
            saw_malformed = kind_of(probe) == "malformed-point";
        }
        CHECK(saw_malformed);
    }
}

TEST_CASE("decoder survives random fuzz frames") {
    const CurveParams& curve = CurveParams::secp256r1();
    SeededRng rng(4);
    int decoded = 0;
    for (int i = 0; i < 100000; ++i) {
        Bytes frame(i % 96);
        rng.fill(frame);
        try {
            decode_message(curve, frame);
            ++decoded;
        } catch (const ProtocolError&) {
        }
    }
    // random bytes essentially never form a valid frame
    CHECK(decoded == 0);
}

TEST_CASE("wire total for an honest handshake") {
    const CurveParams& curve = CurveParams::secp256r1();
    CHECK(m1_payload_size(curve) + kM2PayloadSize + kM3PayloadSize == 69 + 36 + 32);
}
